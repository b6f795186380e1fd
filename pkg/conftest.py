"""Hook de collecte : rend `src/indexbound` importable depuis un simple checkout.

Le dossier `src/` est placé en tête de `sys.path` une seule fois, avant
l'import des modules de test.
"""

import sys
from pathlib import Path

SRC = Path(__file__).parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
