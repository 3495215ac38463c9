# -*- coding: utf-8 -*-
"""
Service de réécriture des mots d'opérateurs
===========================================
Règles de réduction sur {f, g, h} (f = lin, g = complément, h = cor),
formes canoniques et table de multiplication du monoïde.

Deux modes:
- 'general': règles valables pour tout ensemble semi-linéaire
  (gg = ε, ff = f, fgfgfgf = fgf, h = gfg)
- 'convex': ajoute les identités propres aux ensembles convexes d'intérieur
  algébrique non vide, qui ne s'appliquent que lorsque tout ce qui est à
  droite de l'occurrence est dans {f, h}* (l'opérande reste dans la classe)
"""

import logging
from dataclasses import dataclass, field
from itertools import product

import pandas as pd

from config import Config
from errors import RewriteError
from orbit_service import OpWord, apply_word, as_word

logger = logging.getLogger(__name__)

GENERAL = 'general'
CONVEX = 'convex'
MODES = (GENERAL, CONVEX)

ANYWHERE = 'anywhere'
SUFFIX = 'suffix'

# Poids: chaque règle décroît strictement le poids total
WEIGHTS = {'f': 1, 'g': 1, 'h': 4}

# Lettres qui préservent la convexité de l'opérande
CONVEX_SAFE = frozenset('fh')


def weight(word):
    return sum(WEIGHTS[letter] for letter in as_word(word).letters)


@dataclass(frozen=True)
class Rule:
    """
    Règle lhs -> rhs.

    anchor = SUFFIX: l'occurrence doit n'avoir à sa droite que des lettres
    de {f, h} (hypothèse « opérande convexe »).
    """

    lhs: str
    rhs: str
    anchor: str = ANYWHERE
    requirement: str = 'none'
    source: str = ''

    def find(self, letters):
        """Première position admissible de lhs dans letters, ou None."""
        start = letters.find(self.lhs)
        while start != -1:
            if self.anchor == ANYWHERE or set(letters[start + len(self.lhs):]) <= CONVEX_SAFE:
                return start
            start = letters.find(self.lhs, start + 1)
        return None

    def apply(self, letters, position):
        return letters[:position] + self.rhs + letters[position + len(self.lhs):]

    def __str__(self):
        return f"{self.lhs or 'ε'} → {self.rhs or 'ε'}"


GENERAL_RULES = (
    Rule('gg', '', source="g est une involution"),
    Rule('ff', 'f', source="lin est idempotent sur les semi-linéaires"),
    Rule('fgfgfgf', 'fgf', source="identité de Kuratowski"),
    Rule('h', 'gfg', source="cor = g∘lin∘g"),
)

CONVEX_RULES = (
    Rule('hh', 'h', SUFFIX, 'convex-seed', "cor∘cor = cor"),
    Rule('fh', 'f', SUFFIX, 'convex-seed', "lin∘cor = lin (cor non vide)"),
    Rule('hf', 'h', SUFFIX, 'convex-seed', "cor∘lin = cor (cor non vide)"),
    Rule('gg', '', source="g est une involution"),
    Rule('ff', 'f', source="lin est idempotent sur les semi-linéaires"),
    Rule('fgfgf', 'f', SUFFIX, 'convex-seed', "chaîne fA → gfA → fgfA → gfgfA"),
    Rule('fgfg', 'f', SUFFIX, 'convex-seed', "chaîne gA → fgA → gfgA"),
    Rule('fgfgfgf', 'fgf', source="identité de Kuratowski"),
    Rule('h', 'gfg', SUFFIX, 'convex-seed', "complément du cor = lin du complément"),
)

RULES = {GENERAL: GENERAL_RULES, CONVEX: CONVEX_RULES}


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    position: int
    before: str
    after: str

    def to_dict(self):
        return {
            'rule': str(self.rule),
            'position': self.position,
            'before': str(OpWord(self.before)),
            'after': str(OpWord(self.after)),
            'requirement': self.rule.requirement,
        }


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"Mode inconnu: {mode!r} (general ou convex)")


def _check_convex_word(letters):
    """En mode convexe, h n'a de sens que sur un opérande encore convexe."""
    for position, letter in enumerate(letters):
        if letter == 'h' and not set(letters[position + 1:]) <= CONVEX_SAFE:
            raise RewriteError(
                f"h en position {position} de {letters!r}: opérande non convexe "
                f"(un g apparaît à sa droite)",
                position,
            )


def reduce_with_trace(word, mode=GENERAL):
    """
    Réécrit le mot jusqu'à sa forme normale.

    À chaque étape, la première règle (ordre de priorité) ayant une
    occurrence admissible est appliquée à sa première occurrence.

    Returns:
        tuple: (OpWord normal, liste de RewriteStep)

    Raises:
        RewriteError: h mal placé en mode convexe
    """
    _check_mode(mode)
    letters = as_word(word).letters
    if mode == CONVEX:
        _check_convex_word(letters)
    steps = []
    rules = RULES[mode]
    while True:
        for rule in rules:
            position = rule.find(letters)
            if position is not None:
                rewritten = rule.apply(letters, position)
                steps.append(RewriteStep(rule, position, letters, rewritten))
                letters = rewritten
                break
        else:
            return OpWord(letters), steps


def reduce(word, mode=GENERAL):
    return reduce_with_trace(word, mode)[0]


def canonical_key(word):
    """Ordre canonique: longueur puis lexicographique avec f < g < h."""
    letters = as_word(word).letters
    return len(letters), letters


def enumerate_canonical(mode=GENERAL, max_len=None):
    """
    Formes normales des mots sur {f, g} de longueur ≤ max_len.

    Raises:
        ValueError: max_len < 7 (les formes normales ont jusqu'à 7 lettres)
    """
    _check_mode(mode)
    max_len = Config.MONOID_MAX_LEN if max_len is None else max_len
    if max_len < 7:
        raise ValueError(f"max_len={max_len} trop petit (minimum 7)")
    normal_forms = {
        reduce(''.join(letters), mode)
        for length in range(max_len + 1)
        for letters in product('fg', repeat=length)
    }
    words = sorted(normal_forms, key=canonical_key)
    logger.debug("Mode %s: %d formes canoniques", mode, len(words))
    return words


@dataclass
class MonoidTable:
    """Table de composition u∘v -> forme normale de uv."""

    mode: str
    words: list
    entries: dict
    convex_entries: set = field(default_factory=set)

    @property
    def closed(self):
        known = set(self.words)
        return all(result in known for result in self.entries.values())

    def product(self, left, right):
        return self.entries[(as_word(left), as_word(right))]

    def to_frame(self):
        labels = [str(w) for w in self.words]
        rows = [
            [str(self.entries[(u, v)]) + ('*' if (u, v) in self.convex_entries else '') for v in self.words]
            for u in self.words
        ]
        return pd.DataFrame(rows, index=labels, columns=labels)

    def to_text(self):
        text = self.to_frame().to_string()
        if self.convex_entries:
            text += "\n* : réduction utilisant une règle d'ensemble convexe"
        return text

    def to_dict(self):
        return {
            'mode': self.mode,
            'words': [str(w) for w in self.words],
            'table': [[str(self.entries[(u, v)]) for v in self.words] for u in self.words],
            'convex_seed_entries': sorted([str(u), str(v)] for u, v in self.convex_entries),
            'closed': self.closed,
        }


def monoid_table(mode=GENERAL, max_len=None):
    words = enumerate_canonical(mode, max_len)
    entries = {}
    convex_entries = set()
    for u, v in product(words, repeat=2):
        result, steps = reduce_with_trace(u + v, mode)
        entries[(u, v)] = result
        if any(step.rule.requirement == 'convex-seed' for step in steps):
            convex_entries.add((u, v))
    table = MonoidTable(mode, words, entries, convex_entries)
    if not table.closed:
        logger.warning("⚠️ Table %s non close sous la composition", mode)
    return table


def semantic_classes(words, seeds):
    """
    Regroupe des mots selon leur action sur une batterie d'ensembles.

    Deux mots sont dans la même classe s'ils produisent le même ensemble
    sur chaque graine (tous les membres d'une orbite partagent
    l'arrangement de la graine, la comparaison des drapeaux suffit).
    """
    classes = {}
    for word in words:
        signature = tuple(apply_word(word, seed).flags for seed in seeds)
        classes.setdefault(signature, []).append(as_word(word))
    return sorted((sorted(group, key=canonical_key) for group in classes.values()),
                  key=lambda group: canonical_key(group[0]))
