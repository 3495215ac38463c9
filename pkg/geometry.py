# -*- coding: utf-8 -*-
"""
Primitives géométriques exactes
===============================
Rationnels, espace ambiant (dimension 1 ou 2), hyperplans normalisés,
contraintes linéaires et formules booléennes de contraintes.

Toute l'arithmétique passe par fractions.Fraction: aucun flottant.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from errors import DimensionError


RELATIONS = ('<', '<=', '=', '>=', '>')

# Relation obtenue après multiplication des deux membres par -1
_FLIPPED = {'<': '>', '<=': '>=', '=': '=', '>=': '<=', '>': '<'}

# Signes de (a·x - b) compatibles avec chaque relation
_ALLOWED_SIGNS = {
    '<': (-1,),
    '<=': (-1, 0),
    '=': (0,),
    '>=': (0, 1),
    '>': (1,),
}

_RATIONAL_RE = re.compile(r'^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$')


# =============================================================================
# RATIONNELS
# =============================================================================

def parse_rational(value):
    """
    Convertit un entier, une Fraction ou un texte "p" / "p/q" en Fraction.

    Les décimaux sont refusés pour préserver l'exactitude.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Rationnel invalide: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ValueError(f"Rationnel invalide: {value!r} (formes acceptées: p ou p/q)")
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ValueError(f"Dénominateur nul: {value!r}")
        return Fraction(int(numerator), int(denominator or 1))
    raise ValueError(f"Rationnel invalide: {value!r}")


def format_rational(value):
    """Sérialise un rationnel en "p" ou "p/q" (q > 0, forme réduite)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sign(value):
    """Signe exact (-1, 0, 1)."""
    return (value > 0) - (value < 0)


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def as_point(coords, dim=None):
    """Convertit une suite de coordonnées en tuple de Fractions."""
    point = tuple(parse_rational(c) for c in coords)
    if dim is not None and len(point) != dim:
        raise DimensionError(f"Point de dimension {len(point)} dans un espace de dimension {dim}")
    return point


# =============================================================================
# ESPACE AMBIANT
# =============================================================================

@dataclass(frozen=True)
class Space:
    """Espace réel R^dim, dim ∈ {1, 2}."""

    dim: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DimensionError(f"Dimension non supportée: {self.dim} (1 ou 2 uniquement)")

    def origin(self):
        return (Fraction(0),) * self.dim


def check_same_space(*spaces):
    first = spaces[0]
    for other in spaces[1:]:
        if other != first:
            raise DimensionError(f"Espaces incompatibles: dimension {first.dim} et {other.dim}")
    return first


# =============================================================================
# HYPERPLANS ET CONTRAINTES
# =============================================================================

@dataclass(frozen=True, order=True)
class Hyperplane:
    """
    Droite (dimension 2) ou point (dimension 1) d'équation a·x = b.

    a est un vecteur entier primitif dont le premier coefficient non nul
    est positif: deux équations du même hyperplan sont donc égales.
    """

    a: tuple
    b: Fraction

    @property
    def dim(self):
        return len(self.a)

    def evaluate(self, point):
        """Valeur exacte de a·x - b."""
        return dot(self.a, point) - self.b

    def side(self, point):
        return sign(self.evaluate(point))

    def direction(self):
        """Vecteur directeur entier (dimension 2 uniquement)."""
        return (-self.a[1], self.a[0])

    def foot(self):
        """Point rationnel de l'hyperplan le plus proche de l'origine."""
        norm2 = sum(c * c for c in self.a)
        return tuple(Fraction(c) * self.b / norm2 for c in self.a)

    def to_list(self):
        return [*self.a, format_rational(self.b)]


def normalize_equation(coefficients, bound):
    """
    Normalise a·x = b en (Hyperplane, retourné).

    Returns:
        tuple: (hyperplan canonique, True si l'équation a été multipliée par -1)
    """
    coefficients = [parse_rational(c) for c in coefficients]
    bound = parse_rational(bound)
    if all(c == 0 for c in coefficients):
        raise ValueError("Coefficients tous nuls: ce n'est pas un hyperplan")

    scale = reduce(lambda acc, c: acc * c.denominator // gcd(acc, c.denominator), coefficients, 1)
    integers = [int(c * scale) for c in coefficients]
    divisor = reduce(gcd, (abs(c) for c in integers))
    integers = [c // divisor for c in integers]
    bound = bound * scale / divisor

    leading = next(c for c in integers if c != 0)
    flipped = leading < 0
    if flipped:
        integers = [-c for c in integers]
        bound = -bound
    return Hyperplane(tuple(integers), bound), flipped


@dataclass(frozen=True)
class LinConstraint:
    """Contrainte a·x REL b sur un hyperplan normalisé."""

    hyperplane: Hyperplane
    relation: str

    @classmethod
    def make(cls, coefficients, relation, bound):
        if relation not in RELATIONS:
            raise ValueError(f"Relation inconnue: {relation!r}")
        hyperplane, flipped = normalize_equation(coefficients, bound)
        return cls(hyperplane, _FLIPPED[relation] if flipped else relation)

    @property
    def dim(self):
        return self.hyperplane.dim

    def holds_for_sign(self, side):
        return side in _ALLOWED_SIGNS[self.relation]

    def holds(self, point):
        if len(point) != self.dim:
            raise DimensionError(f"Point de dimension {len(point)} pour une contrainte de dimension {self.dim}")
        return self.holds_for_sign(self.hyperplane.side(point))

    def __str__(self):
        names = ('x', 'y')
        terms = ' + '.join(f"{c}{names[i]}" for i, c in enumerate(self.hyperplane.a) if c != 0)
        return f"{terms} {self.relation} {format_rational(self.hyperplane.b)}"


# =============================================================================
# FORMULES BOOLÉENNES
# =============================================================================

class Formula:
    """Combinaison booléenne finie de contraintes linéaires."""

    def holds(self, point):
        raise NotImplementedError

    def constraints(self):
        raise NotImplementedError

    def hyperplanes(self):
        return sorted({c.hyperplane for c in self.constraints()})

    def dims(self):
        return {c.dim for c in self.constraints()}

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Atom(Formula):
    constraint: LinConstraint

    def holds(self, point):
        return self.constraint.holds(point)

    def constraints(self):
        return [self.constraint]


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def holds(self, point):
        return all(p.holds(point) for p in self.parts)

    def constraints(self):
        return [c for p in self.parts for c in p.constraints()]


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def holds(self, point):
        return any(p.holds(point) for p in self.parts)

    def constraints(self):
        return [c for p in self.parts for c in p.constraints()]


@dataclass(frozen=True)
class Not(Formula):
    part: Formula

    def holds(self, point):
        return not self.part.holds(point)

    def constraints(self):
        return self.part.constraints()


@dataclass(frozen=True)
class Constant(Formula):
    value: bool

    def holds(self, point):
        return self.value

    def constraints(self):
        return []


def halfspace(coefficients, relation, bound):
    """Raccourci: formule atomique a·x REL b."""
    return Atom(LinConstraint.make(coefficients, relation, bound))


def conjunction(*formulas):
    return And(tuple(formulas))


def disjunction(*formulas):
    return Or(tuple(formulas))
