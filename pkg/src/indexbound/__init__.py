"""
IndexBound - Estimation certifiée de la constante universelle C
---------------------------------------------------------------

Pipeline numérique complet qui borne la constante C du théorème d'indice
relatif quantitatif : C = σ · 2 · 15, où σ est le « trou spectral »
minimal atteignable par une fonction normalisante dont la transformée de
Fourier est supportée dans [-2, 2].

Sous-modules disponibles :
- matgap      : idempotent d'indice P_a, norme, seuil de déviation, θ,
                construction différence E(p1, p2), projection de Riesz
- specfun     : sinus intégral Si, base φ_k, χ_f, borne de queue certifiée
- slepian     : quadrature de Gauss-Legendre, opérateur de concentration T_σ
                (Nyström + itération de sous-espace), méthode 1 (C ≈ 86.05)
- designer    : contraintes LP, simplexe dense, minimisation de σ,
                vérification indépendante des profils (C ≤ 40.8)
- report      : ConstantReport, sérialisation JSON/CSV/texte, provenance
- config      : RunConfig (défauts ← YAML ← flags CLI)
- acceptance  : critères d'acceptation exécutés par `verify-paper`
- cli         : sous-commandes constant / design / chi-plot / verify-paper

Auteur : IndexBound Team
Licence : MIT
"""

__version__ = "0.1.0"
__author__ = "IndexBound Team"

# Aucun import eager au niveau du package : chaque sous-module est
# importé explicitement par l'appelant (la CLI importe paresseusement
# le pipeline LP, plus lourd à construire).
