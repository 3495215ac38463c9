# -*- coding: utf-8 -*-
"""
Moteur d'ensembles semi-linéaires
=================================
Un ensemble semi-linéaire de R (dimension 1) ou R² (dimension 2) est
représenté par un arrangement de droites dont chaque face (sommet, arête
ouverte, cellule ouverte) porte un drapeau d'appartenance.

Les faces sont identifiées par leur vecteur de signes exact sur les
droites de l'arrangement; chaque face possède un représentant rationnel
intérieur et son étoile (les faces dont elle est au bord).
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import pairwise

from config import Config
from errors import CapacityError, DimensionError
from geometry import (
    Hyperplane, Space, as_point, check_same_space, dot, format_rational,
    normalize_equation, sign,
)

logger = logging.getLogger(__name__)

VERTEX = 'vertex'
EDGE = 'edge'
CELL = 'cell'


# =============================================================================
# ARRANGEMENT
# =============================================================================

@dataclass(frozen=True)
class Face:
    """
    Face relativement ouverte de l'arrangement.

    Attributes:
        index: position dans l'ordre canonique (sommets, arêtes, cellules)
        kind: VERTEX, EDGE ou CELL
        signs: signe de a·x - b pour chaque droite
        representative: point rationnel intérieur à la face
        star: indices des faces de dimension supérieure incidentes
        line: droite support (arêtes en dimension 2)
    """

    index: int
    kind: str
    signs: tuple
    representative: tuple
    star: tuple
    line: int = None


class Arrangement:
    """Arrangement immuable de droites (ou de points en dimension 1)."""

    def __init__(self, space, lines, faces):
        self.space = space
        self.lines = lines
        self.faces = faces
        self._by_signs = {face.signs: face.index for face in faces}
        self.vertices = tuple(f.index for f in faces if f.kind == VERTEX)
        self.edges = tuple(f.index for f in faces if f.kind == EDGE)
        self.cells = tuple(f.index for f in faces if f.kind == CELL)

    def __eq__(self, other):
        return isinstance(other, Arrangement) and (self.space, self.lines) == (other.space, other.lines)

    def __hash__(self):
        return hash((self.space, self.lines))

    def __len__(self):
        return len(self.faces)

    def __repr__(self):
        return (f"Arrangement(dim={self.space.dim}, lignes={len(self.lines)}, "
                f"sommets={len(self.vertices)}, arêtes={len(self.edges)}, cellules={len(self.cells)})")

    def signs_of(self, point):
        point = as_point(point, self.space.dim)
        return tuple(line.side(point) for line in self.lines)

    def locate_signs(self, signs):
        """Indice de la face de vecteur de signes donné."""
        return self._by_signs[tuple(signs)]

    def locate(self, point):
        """Indice de l'unique face contenant le point."""
        return self._by_signs[self.signs_of(point)]

    def faces_on_line(self, i):
        """Faces portées par la droite i, ordonnées le long de la droite."""
        on_line = [f for f in self.faces if f.signs[i] == 0]
        if self.space.dim == 1:
            return [f.index for f in on_line]
        direction = self.lines[i].direction()
        on_line.sort(key=lambda f: dot(direction, f.representative))
        return [f.index for f in on_line]

    def counts(self):
        return {
            'lines': len(self.lines),
            'vertices': len(self.vertices),
            'edges': len(self.edges),
            'cells': len(self.cells),
        }


def build_arrangement(lines, space, capacity=None):
    """
    Construit l'arrangement complet (faces, incidences, représentants).

    Args:
        lines: hyperplans (doublons tolérés)
        space: Space
        capacity: nombre maximal de droites (défaut Config.MAX_LINES)

    Returns:
        Arrangement

    Raises:
        DimensionError: hyperplan d'une autre dimension
        CapacityError: trop de droites après déduplication
    """
    if capacity is None:
        capacity = Config.MAX_LINES
    unique = sorted(set(lines))
    for line in unique:
        if line.dim != space.dim:
            raise DimensionError(f"Hyperplan de dimension {line.dim} dans un espace de dimension {space.dim}")
    if len(unique) > capacity:
        raise CapacityError(f"{len(unique)} droites après déduplication (capacité {capacity})")
    return _build(space, tuple(unique))


@lru_cache(maxsize=512)
def _build(space, lines):
    if space.dim == 1:
        arrangement = _build_1d(space, lines)
    else:
        arrangement = _build_2d(space, lines)
    logger.debug("Arrangement construit: %r", arrangement)
    return arrangement


def _build_1d(space, lines):
    points = [line.b / line.a[0] for line in lines]
    n = len(points)

    def signs(x):
        return tuple(sign(x - p) for p in points)

    faces = []
    for k, p in enumerate(points):
        faces.append(Face(k, VERTEX, signs(p), (p,), (n + k, n + k + 1)))
    for j in range(n + 1):
        if n == 0:
            x = Fraction(0)
        elif j == 0:
            x = points[0] - 1
        elif j == n:
            x = points[-1] + 1
        else:
            x = (points[j - 1] + points[j]) / 2
        faces.append(Face(n + j, CELL, signs(x), (x,), ()))
    return Arrangement(space, lines, tuple(faces))


def _intersection(first, second):
    (a1, b1), (a2, b2) = first.a, second.a
    det = a1 * b2 - b1 * a2
    if det == 0:
        return None
    x = (first.b * b2 - b1 * second.b) / Fraction(det)
    y = (a1 * second.b - first.b * a2) / Fraction(det)
    return (x, y)


def _clearance(lines, i, point):
    """Pas t tel que point ± t·a_i ne traverse aucune autre droite."""
    normal = lines[i].a
    best = None
    for k, other in enumerate(lines):
        if k == i:
            continue
        rate = dot(other.a, normal)
        if rate == 0:
            continue
        distance = abs(other.evaluate(point)) / abs(rate)
        if best is None or distance < best:
            best = distance
    return Fraction(1) if best is None else best / 2


def _build_2d(space, lines):
    # Insertion incrémentale: chaque nouvelle droite coupe les précédentes
    incidence = {}
    for j, line in enumerate(lines):
        for i in range(j):
            point = _intersection(lines[i], line)
            if point is not None:
                incidence.setdefault(point, set()).update((i, j))

    def signs(point):
        return tuple(line.side(point) for line in lines)

    vertex_points = sorted(incidence)
    vertex_index = {p: k for k, p in enumerate(vertex_points)}

    # Arêtes: segments ouverts, demi-droites et droites entières
    edge_records = []
    for i, line in enumerate(lines):
        d = line.direction()
        on_line = sorted((p for p in vertex_points if i in incidence[p]), key=lambda p: dot(d, p))
        if not on_line:
            edge_records.append((i, line.foot(), ()))
            continue
        first, last = on_line[0], on_line[-1]
        edge_records.append((i, (first[0] - d[0], first[1] - d[1]), (vertex_index[first],)))
        for p, q in pairwise(on_line):
            middle = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
            edge_records.append((i, middle, (vertex_index[p], vertex_index[q])))
        edge_records.append((i, (last[0] + d[0], last[1] + d[1]), (vertex_index[last],)))

    # Cellules: de part et d'autre de chaque arête
    cell_reps = {}
    side_signs = []
    for i, rep, _ in edge_records:
        base = signs(rep)
        sides = []
        for s in (1, -1):
            cell_signs = base[:i] + (s,) + base[i + 1:]
            if cell_signs not in cell_reps:
                t = _clearance(lines, i, rep) * s
                normal = lines[i].a
                cell_reps[cell_signs] = (rep[0] + t * normal[0], rep[1] + t * normal[1])
            sides.append(cell_signs)
        side_signs.append((base, sides))
    if not lines:
        cell_reps[()] = space.origin()

    n_vertices = len(vertex_points)
    n_edges = len(edge_records)
    cell_order = sorted(cell_reps)
    cell_index = {s: n_vertices + n_edges + k for k, s in enumerate(cell_order)}

    edge_stars = [tuple(sorted(cell_index[s] for s in sides)) for _, sides in side_signs]
    vertex_star = {k: set() for k in range(n_vertices)}
    for e, (_, _, endpoints) in enumerate(edge_records):
        for v in endpoints:
            vertex_star[v].add(n_vertices + e)
            vertex_star[v].update(edge_stars[e])

    faces = []
    for k, p in enumerate(vertex_points):
        faces.append(Face(k, VERTEX, signs(p), p, tuple(sorted(vertex_star[k]))))
    for e, (i, rep, _) in enumerate(edge_records):
        faces.append(Face(n_vertices + e, EDGE, side_signs[e][0], rep, edge_stars[e], i))
    for s in cell_order:
        faces.append(Face(cell_index[s], CELL, s, cell_reps[s], ()))
    return Arrangement(space, lines, tuple(faces))


# =============================================================================
# ENSEMBLES DRAPEAUTÉS
# =============================================================================

@dataclass(frozen=True)
class FlaggedSet:
    """Ensemble semi-linéaire: un drapeau booléen par face de l'arrangement."""

    arrangement: Arrangement
    flags: tuple

    def __post_init__(self):
        if len(self.flags) != len(self.arrangement.faces):
            raise ValueError(f"{len(self.flags)} drapeaux pour {len(self.arrangement.faces)} faces")

    @property
    def space(self):
        return self.arrangement.space

    @property
    def dim(self):
        return self.arrangement.space.dim

    def with_flags(self, flags):
        return FlaggedSet(self.arrangement, tuple(bool(f) for f in flags))

    def flagged_faces(self):
        return [face for face, flag in zip(self.arrangement.faces, self.flags) if flag]

    def is_empty(self):
        return not any(self.flags)

    def is_full(self):
        return all(self.flags)

    def to_dict(self):
        """Sérialisation JSON: {dim, lines, flags: {vertices, edges, cells}}."""
        arrangement = self.arrangement
        return {
            'dim': self.dim,
            'lines': [line.to_list() for line in arrangement.lines],
            'flags': {
                'vertices': [self.flags[i] for i in arrangement.vertices],
                'edges': [self.flags[i] for i in arrangement.edges],
                'cells': [self.flags[i] for i in arrangement.cells],
            },
        }

    def describe(self):
        return describe(self)

    def __str__(self):
        return describe(self)


def empty_set(space):
    return FlaggedSet(build_arrangement([], space), (False,))


def full_set(space):
    return FlaggedSet(build_arrangement([], space), (True,))


def formula_to_set(formula, space):
    """
    Convertit une formule booléenne de contraintes en ensemble drapeauté.

    Chaque face est marquée en évaluant la formule en son représentant.

    Raises:
        DimensionError: contrainte d'une autre dimension que l'espace
    """
    for dim in formula.dims():
        if dim != space.dim:
            raise DimensionError(f"Contrainte de dimension {dim} dans un espace de dimension {space.dim}")
    arrangement = build_arrangement(formula.hyperplanes(), space)
    flags = tuple(formula.holds(face.representative) for face in arrangement.faces)
    return FlaggedSet(arrangement, flags)


def set_from_dict(data):
    """Inverse de FlaggedSet.to_dict."""
    space = Space(int(data['dim']))
    lines = []
    for row in data['lines']:
        hyperplane, _ = normalize_equation(row[:-1], row[-1])
        lines.append(hyperplane)
    arrangement = build_arrangement(lines, space)
    if tuple(lines) != arrangement.lines:
        raise ValueError("Droites non canoniques: l'ordre des drapeaux serait ambigu")
    flags = [False] * len(arrangement.faces)
    groups = data['flags']
    for key, indices in (('vertices', arrangement.vertices), ('edges', arrangement.edges),
                         ('cells', arrangement.cells)):
        values = groups.get(key, [])
        if len(values) != len(indices):
            raise ValueError(f"{len(values)} drapeaux '{key}' pour {len(indices)} faces")
        for i, value in zip(indices, values):
            flags[i] = bool(value)
    return FlaggedSet(arrangement, tuple(flags))


# =============================================================================
# OPÉRATIONS BOOLÉENNES
# =============================================================================

def refine(first, second):
    """
    Réexprime deux ensembles sur l'arrangement réunion de leurs droites.

    Le transfert des drapeaux localise le représentant de chaque nouvelle
    face dans l'ancien arrangement; l'appartenance est inchangée.
    """
    check_same_space(first.space, second.space)
    if first.arrangement == second.arrangement:
        return first, second
    merged = build_arrangement(first.arrangement.lines + second.arrangement.lines, first.space)
    return transfer(first, merged), transfer(second, merged)


def transfer(flagged, arrangement):
    """Reporte un ensemble sur un arrangement plus fin (ou différent)."""
    if flagged.arrangement == arrangement:
        return flagged
    flags = tuple(member(flagged, face.representative) for face in arrangement.faces)
    return FlaggedSet(arrangement, flags)


def complement(flagged):
    return flagged.with_flags(not f for f in flagged.flags)


def union(first, second):
    first, second = refine(first, second)
    return first.with_flags(a or b for a, b in zip(first.flags, second.flags))


def intersect(first, second):
    first, second = refine(first, second)
    return first.with_flags(a and b for a, b in zip(first.flags, second.flags))


def difference(first, second):
    first, second = refine(first, second)
    return first.with_flags(a and not b for a, b in zip(first.flags, second.flags))


def member(flagged, point):
    """Appartenance exacte d'un point rationnel."""
    return flagged.flags[flagged.arrangement.locate(point)]


def equal(first, second):
    """Égalité sémantique (complète): drapeaux identiques après raffinement."""
    first, second = refine(first, second)
    return first.flags == second.flags


def is_subset(first, second):
    first, second = refine(first, second)
    return all(b or not a for a, b in zip(first.flags, second.flags))


def is_empty(flagged):
    return flagged.is_empty()


def prune(flagged):
    """Retire les droites dont l'absence ne change pas l'ensemble."""
    current = flagged
    for line in flagged.arrangement.lines:
        remaining = [h for h in current.arrangement.lines if h != line]
        candidate = transfer(current, build_arrangement(remaining, current.space))
        if equal(candidate, current):
            current = candidate
    return current


# =============================================================================
# DESCRIPTION TEXTE
# =============================================================================

def describe(flagged):
    """Notation d'intervalles en dimension 1, JSON compact en dimension 2."""
    if flagged.dim == 2:
        return json.dumps(flagged.to_dict(), separators=(',', ':'))
    return _describe_1d(flagged)


def _describe_1d(flagged):
    arrangement = flagged.arrangement
    n = len(arrangement.lines)
    points = [arrangement.faces[k].representative[0] for k in range(n)]

    sequence = []
    for k in range(n):
        sequence.append((CELL, k))
        sequence.append((VERTEX, k))
    sequence.append((CELL, n))

    def flag(item):
        kind, k = item
        return flagged.flags[k] if kind == VERTEX else flagged.flags[n + k]

    runs = []
    start = None
    for position, item in enumerate(sequence):
        if flag(item) and start is None:
            start = position
        if not flag(item) and start is not None:
            runs.append((sequence[start], sequence[position - 1]))
            start = None
    if start is not None:
        runs.append((sequence[start], sequence[-1]))
    if not runs:
        return '∅'

    parts = []
    for (first_kind, first), (last_kind, last) in runs:
        if first_kind == VERTEX and (first_kind, first) == (last_kind, last):
            parts.append('{' + format_rational(points[first]) + '}')
            continue
        if first_kind == VERTEX:
            left = '[' + format_rational(points[first])
        else:
            left = '(' + ('-inf' if first == 0 else format_rational(points[first - 1]))
        if last_kind == VERTEX:
            right = format_rational(points[last]) + ']'
        else:
            right = ('+inf' if last == n else format_rational(points[last])) + ')'
        parts.append(f"{left}, {right}")
    return ' ∪ '.join(parts)
