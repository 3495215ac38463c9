# -*- coding: utf-8 -*-
"""
Service d'orbites clôture / complément
======================================
Énumère m(A) = {wA : w mot sur {f, g}} où f = lin, g = complément
(h = cor est accepté dans les mots appliqués).

Les mots s'appliquent de droite à gauche: "fg" = lin(complément(A)).
"""

import logging
from collections import deque
from dataclasses import dataclass, field

from arrangement_service import complement, describe, equal
from errors import PreconditionError, RewriteError
from operators_service import OperatorReport, cor, is_convex, lin

logger = logging.getLogger(__name__)

ALPHABET = 'fgh'

OPERATORS = {
    'f': lin,
    'g': complement,
    'h': cor,
}

# Les huit mots de la borne pour un ensemble convexe
CONVEX_BOUND_WORDS = ('', 'g', 'f', 'gf', 'fg', 'gfg', 'fgf', 'gfgf')

# Chaînes de réduction: A → fA → gfA → fgfA → gfgfA → fgfgfA
# et A → gA → fgA → gfgA → fgfgA
PROOF_CHAINS = (
    ('', 'f', 'gf', 'fgf', 'gfgf', 'fgfgf'),
    ('', 'g', 'fg', 'gfg', 'fgfg'),
)


# =============================================================================
# MOTS
# =============================================================================

@dataclass(frozen=True, order=True)
class OpWord:
    """Mot d'opérateurs sur {f, g, h}, appliqué de droite à gauche."""

    letters: str = ''

    def __post_init__(self):
        for position, letter in enumerate(self.letters):
            if letter not in ALPHABET:
                raise RewriteError(f"Lettre inconnue {letter!r} dans {self.letters!r}", position)

    @classmethod
    def parse(cls, text):
        text = (text or '').strip()
        return cls('' if text in ('', 'ε', 'e') else text)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        other = other.letters if isinstance(other, OpWord) else other
        return OpWord(self.letters + other)

    def __str__(self):
        return self.letters or 'ε'

    def display(self):
        """Forme d'affichage sans 'gg' ni 'ff'."""
        letters = self.letters
        while 'gg' in letters or 'ff' in letters:
            letters = letters.replace('gg', '').replace('ff', 'f')
        return str(OpWord(letters))


def as_word(word):
    return word if isinstance(word, OpWord) else OpWord.parse(word)


def apply_word(word, flagged):
    """Compose les opérateurs du mot de droite à gauche."""
    for letter in reversed(as_word(word).letters):
        flagged = OPERATORS[letter](flagged)
    return flagged


# =============================================================================
# ORBITES
# =============================================================================

@dataclass
class Orbit:
    """
    Orbite d'un ensemble sous f et g.

    Attributes:
        seed: ensemble de départ
        members: ensembles distincts (ordre BFS)
        witnesses: mot minimal atteignant chaque membre (f avant g)
        edges: (membre, lettre) -> membre
        collapses: (mot, membre) pour chaque mot retombant sur un membre connu
    """

    seed: object
    members: list
    witnesses: list
    edges: dict
    collapses: list = field(default_factory=list)

    @property
    def size(self):
        return len(self.members)

    def index_of(self, flagged):
        for index, candidate in enumerate(self.members):
            if equal(candidate, flagged):
                return index
        return None

    def follow(self, word):
        """Indice du membre wA obtenu en suivant les transitions."""
        index = 0
        for letter in reversed(as_word(word).letters):
            if letter == 'h':
                raise RewriteError("Les transitions de l'orbite ne portent que f et g")
            index = self.edges[(index, letter)]
        return index

    def back_references(self, index):
        return [str(word) for word, target in self.collapses if target == index]

    def chains(self):
        """Évaluation explicite des deux chaînes de réduction."""
        result = []
        for chain in PROOF_CHAINS:
            steps = []
            for word in chain:
                target = self.follow(word)
                steps.append({
                    'word': str(OpWord(word)),
                    'member': target,
                    'equals': str(self.witnesses[target]) if str(self.witnesses[target]) != str(OpWord(word)) else None,
                })
            result.append(steps)
        return result

    def to_dict(self):
        return {
            'size': self.size,
            'members': [
                {
                    'index': index,
                    'witness': str(self.witnesses[index]),
                    'set': member.to_dict(),
                    'collapses': self.back_references(index),
                }
                for index, member in enumerate(self.members)
            ],
            'chains': self.chains(),
        }

    def to_text(self):
        lines = [f"orbite: {self.size} ensembles"]
        for index, member in enumerate(self.members):
            line = f"[{index}] {self.witnesses[index]} : {describe(member)}"
            references = self.back_references(index)
            if references:
                line += " ← " + ' '.join(references)
            lines.append(line)
        for number, steps in enumerate(self.chains(), start=1):
            lines.append(f"chaîne {number}: " + ' → '.join(f"{s['word']}=[{s['member']}]" for s in steps))
        return '\n'.join(lines)


def enumerate_orbit(seed):
    """
    Fermeture en largeur de {A} sous f et g, par égalité sémantique.

    Termine car tous les membres vivent sur l'arrangement de A
    (nombre fini de drapeaux possibles).
    """
    members = [seed]
    witnesses = [OpWord('')]
    edges = {}
    collapses = []
    queue = deque([0])
    while queue:
        index = queue.popleft()
        for letter in 'fg':
            image = OPERATORS[letter](members[index])
            word = OpWord(letter + witnesses[index].letters)
            target = next((j for j, m in enumerate(members) if equal(m, image)), None)
            if target is None:
                members.append(image)
                witnesses.append(word)
                target = len(members) - 1
                queue.append(target)
            else:
                collapses.append((word, target))
            edges[(index, letter)] = target
    logger.debug("Orbite énumérée: %d ensembles", len(members))
    return Orbit(seed, members, witnesses, edges, collapses)


def verify_convex_bound(seed):
    """
    Vérifie la borne 8 pour un ensemble convexe: taille de l'orbite ≤ 8 et
    chaque membre égal à wA pour un des huit mots de la liste.

    Raises:
        PreconditionError: ensemble non convexe (porte 'is_convex')
    """
    if not is_convex(seed):
        raise PreconditionError('is_convex', "la borne 8 ne concerne que les ensembles convexes")
    orbit = enumerate_orbit(seed)
    images = {word: orbit.follow(word) for word in CONVEX_BOUND_WORDS}
    covered = set(images.values())
    uncovered = [str(orbit.witnesses[j]) for j in range(orbit.size) if j not in covered]
    verdict = orbit.size <= 8 and not uncovered
    regime = 'cor-vide' if cor(seed).is_empty() else 'cor-non-vide'
    return OperatorReport(
        identity='convex-bound',
        seed=seed,
        lhs=orbit.size,
        rhs=8,
        verdict=verdict,
        details={
            'regime': regime,
            'images': {str(OpWord(w)): j for w, j in images.items()},
            'uncovered': uncovered,
        },
    )
