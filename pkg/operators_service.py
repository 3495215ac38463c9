# -*- coding: utf-8 -*-
"""
Opérateurs algébriques cor et lin
=================================
Intérieur algébrique (cor) et clôture algébrique (lin) par la sémantique
des germes de segments, calculés par règles d'étoile sur les drapeaux.

Contient aussi:
- la clôture et l'intérieur topologiques (poset d'incidence, contrôle croisé)
- l'oracle ponctuel des germes x + t·d, t → 0⁺
- la décision exacte de convexité
- le catalogue d'identités et son rapport OperatorReport
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from arrangement_service import complement, equal, member
from errors import DimensionError, PreconditionError
from geometry import as_point, dot, sign

logger = logging.getLogger(__name__)


# =============================================================================
# cor / lin PAR RÈGLES D'ÉTOILE
# =============================================================================

def cor(flagged):
    """
    Intérieur algébrique: une face reste marquée si elle l'est et si toute
    son étoile l'est (un segment fermé initial dans chaque direction).
    """
    flags = flagged.flags
    return flagged.with_flags(
        flag and all(flags[j] for j in face.star)
        for face, flag in zip(flagged.arrangement.faces, flags)
    )


def lin(flagged):
    """
    Clôture algébrique: S plus les points d'où part un segment épointé
    contenu dans S, i.e. les faces dont une face de l'étoile est marquée.
    """
    flags = flagged.flags
    return flagged.with_flags(
        flag or any(flags[j] for j in face.star)
        for face, flag in zip(flagged.arrangement.faces, flags)
    )


# =============================================================================
# OPÉRATEURS TOPOLOGIQUES (contrôle indépendant)
# =============================================================================

def _in_closure(inner, outer):
    """La face de signes inner est-elle dans l'adhérence de la face outer ?"""
    return all(s == t or s == 0 for s, t in zip(inner, outer))


def topo_closure(flagged):
    marked = [face.signs for face in flagged.flagged_faces()]
    return flagged.with_flags(
        any(_in_closure(face.signs, outer) for outer in marked)
        for face in flagged.arrangement.faces
    )


def topo_interior(flagged):
    return complement(topo_closure(complement(flagged)))


# =============================================================================
# ORACLE PONCTUEL DES GERMES
# =============================================================================

@dataclass(frozen=True)
class GermProbe:
    """Germe du rayon x + t·d quand t → 0⁺ (d vecteur entier non nul)."""

    base: tuple
    direction: tuple

    def __post_init__(self):
        if len(self.base) != len(self.direction):
            raise DimensionError("Base et direction de dimensions différentes")
        if all(c == 0 for c in self.direction):
            raise ValueError("Direction nulle")

    def perturbed_signs(self, arrangement):
        """Signe de (a·x - b) + t·(a·d) à t → 0⁺, pour chaque droite."""
        result = []
        for line in arrangement.lines:
            side = line.side(self.base)
            result.append(side if side != 0 else sign(dot(line.a, self.direction)))
        return tuple(result)


def germ_member(flagged, probe):
    """Vrai si x + t·d ∈ S pour tout t > 0 assez petit."""
    face = flagged.arrangement.locate_signs(probe.perturbed_signs(flagged.arrangement))
    return flagged.flags[face]


def _half(u):
    return 0 if u[1] > 0 or (u[1] == 0 and u[0] > 0) else 1


def _angle_cmp(u, v):
    if _half(u) != _half(v):
        return _half(u) - _half(v)
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def candidate_directions(arrangement, point):
    """
    Une direction par classe de germes en x: ± le long de chaque droite
    passant par x, plus une par secteur angulaire entre droites consécutives.
    """
    if arrangement.space.dim == 1:
        return [(1,), (-1,)]
    through = [line for line in arrangement.lines if line.side(point) == 0]
    if not through:
        return [(1, 0)]
    if len(through) == 1:
        d, a = through[0].direction(), through[0].a
        return [d, (-d[0], -d[1]), a, (-a[0], -a[1])]
    rays = []
    for line in through:
        d = line.direction()
        rays.extend([d, (-d[0], -d[1])])
    rays.sort(key=cmp_to_key(_angle_cmp))
    sectors = [(u[0] + v[0], u[1] + v[1]) for u, v in zip(rays, rays[1:] + rays[:1])]
    return rays + sectors


def lin_pointwise(flagged, point):
    """x ∈ S, ou x linéairement accessible depuis S (oracle indépendant)."""
    point = as_point(point, flagged.dim)
    if member(flagged, point):
        return True
    return any(germ_member(flagged, GermProbe(point, d))
               for d in candidate_directions(flagged.arrangement, point))


def cor_pointwise(flagged, point):
    """x ∈ S et un segment fermé initial dans S pour toute direction."""
    point = as_point(point, flagged.dim)
    if not member(flagged, point):
        return False
    return all(germ_member(flagged, GermProbe(point, d))
               for d in candidate_directions(flagged.arrangement, point))


# =============================================================================
# OUVERTS / FERMÉS ALGÉBRIQUES
# =============================================================================

def is_algebraically_open(flagged):
    return equal(flagged, cor(flagged))


def is_algebraically_closed(flagged):
    return equal(flagged, lin(flagged))


# =============================================================================
# CONVEXITÉ
# =============================================================================

def _contiguous(flags):
    started = ended = False
    for flag in flags:
        if flag:
            if ended:
                return False
            started = True
        elif started:
            ended = True
    return True


def _sequence_1d(arrangement):
    """Faces de la droite réelle de gauche à droite."""
    n = len(arrangement.lines)
    order = []
    for k in range(n):
        order.extend([n + k, k])
    order.append(2 * n)
    return order


def supporting_halfplanes(flagged):
    """Demi-plans fermés (droite i, côté σ) de l'arrangement contenant l'ensemble."""
    marked = [face.signs for face in flagged.flagged_faces()]
    constraints = []
    for i in range(len(flagged.arrangement.lines)):
        for side in (1, -1):
            if all(signs[i] in (side, 0) for signs in marked):
                constraints.append((i, side))
    return constraints


def _inside(signs, constraints):
    return all(signs[i] in (side, 0) for i, side in constraints)


def _in_relative_interior(signs, constraints):
    keys = set(constraints)
    for i, side in constraints:
        expected = 0 if (i, -side) in keys else side
        if signs[i] != expected:
            return False
    return True


def is_convex(flagged):
    """
    Décision exacte de convexité.

    (i) lin(S) coïncide avec son enveloppe par demi-plans de l'arrangement;
    (ii) l'intérieur relatif de lin(S) est contenu dans S;
    (iii) la trace de S sur chaque droite est un seul intervalle.
    """
    if flagged.is_empty():
        return True
    arrangement = flagged.arrangement
    if flagged.dim == 1:
        return _contiguous(flagged.flags[i] for i in _sequence_1d(arrangement))

    closure = lin(flagged)
    constraints = supporting_halfplanes(closure)
    envelope = tuple(_inside(face.signs, constraints) for face in arrangement.faces)
    if envelope != closure.flags:
        return False
    for face, flag in zip(arrangement.faces, flagged.flags):
        if not flag and _in_relative_interior(face.signs, constraints):
            return False
    for i in range(len(arrangement.lines)):
        if not _contiguous(flagged.flags[j] for j in arrangement.faces_on_line(i)):
            return False
    return True


def midpoint_convexity_sample(flagged, rng, samples=200):
    """
    Oracle aléatoire unilatéral: cherche x, y ∈ S avec un point du segment
    [x, y] hors de S. Retourne le contre-exemple (x, y, z) ou None.
    """
    points = [face.representative for face in flagged.flagged_faces()]
    if len(points) < 2:
        return None
    for _ in range(samples):
        x, y = rng.choice(points), rng.choice(points)
        t = Fraction(rng.randint(1, 7), 8)
        z = tuple(t * a + (1 - t) * b for a, b in zip(x, y))
        if not member(flagged, z):
            return x, y, z
    return None


# =============================================================================
# IDENTITÉS ET RAPPORTS
# =============================================================================

@dataclass
class OperatorReport:
    """Résultat d'une identité d'opérateurs sur un ensemble de départ."""

    identity: str
    seed: object
    lhs: object
    rhs: object
    verdict: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        def encode(value):
            return value.to_dict() if hasattr(value, 'to_dict') else value
        return {
            'identity': self.identity,
            'seed': encode(self.seed),
            'lhs': encode(self.lhs),
            'rhs': encode(self.rhs),
            'verdict': self.verdict,
            **({'details': self.details} if self.details else {}),
        }


def _has_interior(flagged):
    return not cor(flagged).is_empty()


# nom -> (membre gauche, membre droit, conditions)
IDENTITIES = {
    'cor-idempotent': (lambda s: cor(cor(s)), cor, ()),
    'lin-cor': (lambda s: lin(cor(s)), lin, ('is_convex', 'cor-nonempty')),
    'cor-lin': (lambda s: cor(lin(s)), cor, ('is_convex', 'cor-nonempty')),
    'cor-duality': (lambda s: complement(cor(s)), lambda s: lin(complement(s)), ('is_convex',)),
    'lin-is-closure': (lin, topo_closure, ()),
    'cor-is-interior': (cor, topo_interior, ()),
}

_GATES = {
    'is_convex': (is_convex, "l'ensemble de départ n'est pas convexe"),
    'cor-nonempty': (_has_interior, "cor(S) est vide"),
}


def check_identity(name, flagged, enforce_gates=True):
    """
    Évalue une identité du catalogue sur S.

    Args:
        name: clé de IDENTITIES
        flagged: ensemble de départ
        enforce_gates: lever PreconditionError si une hypothèse manque

    Returns:
        OperatorReport
    """
    if name not in IDENTITIES:
        raise KeyError(f"Identité inconnue: {name}")
    left, right, gates = IDENTITIES[name]
    if enforce_gates:
        for gate in gates:
            predicate, message = _GATES[gate]
            if not predicate(flagged):
                raise PreconditionError(gate, message)
    lhs, rhs = left(flagged), right(flagged)
    verdict = equal(lhs, rhs)
    if not verdict:
        logger.debug("Identité %s violée", name)
    return OperatorReport(name, flagged, lhs, rhs, verdict)
