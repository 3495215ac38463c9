# -*- coding: utf-8 -*-
"""
Exceptions du moteur Kuratowski
===============================
Toutes les erreurs levées par les services dérivent de KuraError.
La couche HTTP les convertit en réponses 400, la CLI en codes de sortie.
"""


class KuraError(Exception):
    """Erreur de base du moteur."""


class DimensionError(KuraError, ValueError):
    """Dimensions incompatibles (espace, point, contrainte)."""


class CapacityError(KuraError):
    """Arrangement trop grand (plus de MAX_LINES droites)."""


class PreconditionError(KuraError):
    """
    Hypothèse d'un théorème non satisfaite.

    Attributes:
        gate: nom de la condition violée ('is_convex', 'nonempty', 'cor-nonempty')
    """

    def __init__(self, gate, message):
        super().__init__(f"{gate}: {message}")
        self.gate = gate


class CertificateValidationError(KuraError, ValueError):
    """Certificat mal formé (fonctionnelle nulle, dimension fausse)."""


class SeparationError(KuraError):
    """Aucune direction candidate ne sépare S de T alors que cor(S) ∩ T est vide."""


class RewriteError(KuraError, ValueError):
    """Mot rejeté par le réécrivain (lettre inconnue, h mal placé)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)
        self.position = position


class DslError(KuraError):
    """Erreur du langage de script, avec position source."""

    exit_code = 3

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"ligne {line}, colonne {column}: {message}"
        super().__init__(message)


class DslSyntaxError(DslError):
    """Erreur de syntaxe (code de sortie 2)."""

    exit_code = 2


class DslSemanticError(DslError):
    """Identifiant non lié, dimension incohérente, argument invalide (code 3)."""

    exit_code = 3
