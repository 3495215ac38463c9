# -*- coding: utf-8 -*-
"""
Langage de scripts .kura
========================
Tokeniseur, analyseur descendant récursif, AST, réimpression et
évaluateur produisant un rapport déterministe (texte ou JSON).

Grammaire:
    script  := stmt*
    stmt    := 'let' IDENT '=' sexpr ';'
             | 'show' sexpr ';'
             | 'assert' sexpr ('==' | '<=') sexpr ';'
             | 'orbit' '(' sexpr ')' ';'
             | 'monoid' '(' ('general' | 'convex') ')' ';'
             | 'separate' '(' sexpr ',' sexpr ')' ';'
    sexpr   := IDENT | 'empty' | 'space' | FUNC '(' arg (',' arg)* ')'
    arg     := sexpr | RATIONAL | RELATION | CODE

Les commentaires commencent par '#'. Les positions sont 1-indexées.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from functools import reduce as fold

from arrangement_service import (
    complement, describe, difference, empty_set, equal, full_set,
    intersect, is_subset, union,
)
from config import Config
from errors import DslSemanticError, DslSyntaxError, KuraError, PreconditionError
from geometry import RELATIONS, Space, format_rational, parse_rational
from monoid_service import MODES, enumerate_canonical
from operators_service import cor, lin, topo_closure, topo_interior
from orbit_service import enumerate_orbit
from separation_service import ConvexHRep, cor_hrep, hrep_to_flagged, lin_hrep, separate

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({'let', 'show', 'assert', 'orbit', 'monoid', 'separate', 'empty', 'space'})
SET_FUNCTIONS = frozenset({'union', 'inter', 'diff', 'cmpl', 'lin', 'cor', 'cl', 'int'})
CONSTRUCTORS = frozenset({'hs', 'seg', 'pt', 'box'})
FUNCTIONS = SET_FUNCTIONS | CONSTRUCTORS
ENDPOINT_CODES = ('cc', 'co', 'oc', 'oo')

# constructeur -> {arité: dimension}
CONSTRUCTOR_ARITIES = {
    'hs': {3: 1, 4: 2},
    'seg': {3: 1, 5: 2},
    'pt': {1: 1, 2: 2},
    'box': {2: 1, 4: 2},
}

_TOKEN_RE = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<code>'[^'\n]*'|"[^"\n]*")
  | (?P<op>==|<=|>=|[<>=(),;])
""", re.VERBOSE)


# =============================================================================
# TOKENISEUR
# =============================================================================

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(source):
    """Découpe le source en jetons (les blancs et commentaires sont ignorés)."""
    tokens = []
    line, line_start, position = 1, 0, 0
    while position < len(source):
        match = _TOKEN_RE.match(source, position)
        column = position - line_start + 1
        if not match:
            raise DslSyntaxError(f"caractère inattendu {source[position]!r}", line, column)
        kind = match.lastgroup
        text = match.group()
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind not in ('space', 'comment'):
            tokens.append(Token(kind, text, line, column))
        position = match.end()
    tokens.append(Token('eof', '', line, position - line_start + 1))
    return tokens


# =============================================================================
# AST
# =============================================================================

@dataclass(frozen=True)
class Ref:
    name: str
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Num:
    value: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Rel:
    op: str
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Code:
    text: str
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    expr: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Show:
    expr: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Assert:
    left: object
    op: str
    right: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class OrbitStmt:
    expr: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class MonoidStmt:
    mode: str
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class SeparateStmt:
    left: object
    right: object
    pos: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Script:
    statements: tuple


# =============================================================================
# ANALYSEUR
# =============================================================================

class Parser:
    """Analyseur descendant récursif à un jeton d'avance."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        if token.kind != 'eof':
            self.index += 1
        return token

    def error(self, expected, token=None):
        token = token or self.peek()
        found = 'fin de fichier' if token.kind == 'eof' else repr(token.text)
        raise DslSyntaxError(f"attendu: {expected}, trouvé {found}", token.line, token.column)

    def expect(self, text, expected=None):
        token = self.peek()
        if token.text != text or token.kind in ('code', 'eof'):
            self.error(expected or repr(text))
        return self.advance()

    def parse_script(self):
        statements = []
        while self.peek().kind != 'eof':
            statements.append(self.parse_statement())
        return Script(tuple(statements))

    def parse_statement(self):
        token = self.peek()
        pos = (token.line, token.column)
        if token.kind != 'ident' or token.text not in KEYWORDS - {'empty', 'space'}:
            self.error("instruction (let, show, assert, orbit, monoid, separate)")
        keyword = self.advance().text

        if keyword == 'let':
            name = self.peek()
            if name.kind != 'ident' or name.text in KEYWORDS or name.text in FUNCTIONS:
                self.error("identifiant")
            self.advance()
            self.expect('=')
            statement = Let(name.text, self.parse_expr(), pos)
        elif keyword == 'show':
            statement = Show(self.parse_expr(), pos)
        elif keyword == 'assert':
            left = self.parse_expr()
            op = self.peek()
            if op.kind != 'op' or op.text not in ('==', '<='):
                self.error("'==' ou '<='")
            self.advance()
            statement = Assert(left, op.text, self.parse_expr(), pos)
        elif keyword == 'orbit':
            self.expect('(')
            expr = self.parse_expr()
            self.expect(')')
            statement = OrbitStmt(expr, pos)
        elif keyword == 'monoid':
            self.expect('(')
            mode = self.peek()
            if mode.kind != 'ident' or mode.text not in MODES:
                self.error("'general' ou 'convex'")
            self.advance()
            self.expect(')')
            statement = MonoidStmt(mode.text, pos)
        else:
            self.expect('(')
            left = self.parse_expr()
            self.expect(',')
            right = self.parse_expr()
            self.expect(')')
            statement = SeparateStmt(left, right, pos)
        self.expect(';')
        return statement

    def parse_expr(self):
        token = self.peek()
        pos = (token.line, token.column)
        if token.kind != 'ident':
            self.error("expression")
        if token.text in ('empty', 'space'):
            self.advance()
            return Const(token.text, pos)
        if token.text in KEYWORDS:
            self.error("expression")
        self.advance()
        if token.text in FUNCTIONS:
            self.expect('(')
            args = [self.parse_arg()]
            while self.peek().text == ',' and self.peek().kind == 'op':
                self.advance()
                args.append(self.parse_arg())
            self.expect(')', "',' ou ')'")
            return Call(token.text, tuple(args), pos)
        if self.peek().text == '(' and self.peek().kind == 'op':
            raise DslSyntaxError(f"fonction inconnue {token.text!r}", token.line, token.column)
        return Ref(token.text, pos)

    def parse_arg(self):
        token = self.peek()
        pos = (token.line, token.column)
        if token.kind == 'number':
            self.advance()
            try:
                return Num(parse_rational(token.text), pos)
            except ValueError as exc:
                raise DslSyntaxError(str(exc), token.line, token.column) from exc
        if token.kind == 'op' and token.text in RELATIONS:
            self.advance()
            return Rel(token.text, pos)
        if token.kind == 'code':
            self.advance()
            return Code(token.text[1:-1], pos)
        return self.parse_expr()


def parse_script(source):
    return Parser(tokenize(source)).parse_script()


def parse_expression(source):
    """Analyse une expression isolée (option -e de la ligne de commande)."""
    parser = Parser(tokenize(source))
    expr = parser.parse_expr()
    if parser.peek().kind != 'eof':
        parser.error("fin de l'expression")
    return expr


# =============================================================================
# RÉIMPRESSION
# =============================================================================

def format_expr(expr):
    if isinstance(expr, (Ref, Const)):
        return expr.name
    if isinstance(expr, Num):
        return format_rational(expr.value)
    if isinstance(expr, Rel):
        return expr.op
    if isinstance(expr, Code):
        return f"'{expr.text}'"
    return f"{expr.fn}(" + ', '.join(format_expr(a) for a in expr.args) + ")"


def format_statement(statement):
    if isinstance(statement, Let):
        return f"let {statement.name} = {format_expr(statement.expr)};"
    if isinstance(statement, Show):
        return f"show {format_expr(statement.expr)};"
    if isinstance(statement, Assert):
        return f"assert {format_expr(statement.left)} {statement.op} {format_expr(statement.right)};"
    if isinstance(statement, OrbitStmt):
        return f"orbit({format_expr(statement.expr)});"
    if isinstance(statement, MonoidStmt):
        return f"monoid({statement.mode});"
    return f"separate({format_expr(statement.left)}, {format_expr(statement.right)});"


def format_script(script):
    return ''.join(format_statement(s) + '\n' for s in script.statements)


# =============================================================================
# INFÉRENCE DE DIMENSION
# =============================================================================

def _calls(node):
    if isinstance(node, Call):
        yield node
        for arg in node.args:
            yield from _calls(arg)
    elif isinstance(node, Script):
        for statement in node.statements:
            yield from _calls(statement)
    elif isinstance(node, (Let, Show, OrbitStmt)):
        yield from _calls(node.expr)
    elif isinstance(node, (Assert, SeparateStmt)):
        yield from _calls(node.left)
        yield from _calls(node.right)


def infer_dimension(node, requested=None, default=None):
    """
    Dimension imposée par l'arité des constructeurs (hs, seg, pt, box).

    Raises:
        DslSemanticError: arité invalide ou dimensions contradictoires
    """
    inferred = None
    origin = None
    for call in _calls(node):
        if call.fn not in CONSTRUCTORS:
            continue
        arities = CONSTRUCTOR_ARITIES[call.fn]
        if len(call.args) not in arities:
            expected = ' ou '.join(str(a) for a in sorted(arities))
            raise DslSemanticError(
                f"{call.fn} attend {expected} arguments, {len(call.args)} reçus", *call.pos)
        dim = arities[len(call.args)]
        if inferred is None:
            inferred, origin = dim, call
        elif dim != inferred:
            raise DslSemanticError(
                f"dimension incohérente: {call.fn} en dimension {dim}, "
                f"{origin.fn} ligne {origin.pos[0]} en dimension {inferred}", *call.pos)
    if inferred is not None and requested is not None and requested != inferred:
        raise DslSemanticError(f"--dim {requested} contredit la dimension {inferred} du script",
                               *origin.pos)
    if inferred is not None:
        return inferred
    return requested or default or Config.DEFAULT_DIM


# =============================================================================
# ÉVALUATION
# =============================================================================

@dataclass
class Value:
    """Ensemble évalué, avec sa représentation H quand il est convexe par construction."""

    set: object
    hrep: ConvexHRep = None


@dataclass
class StatementResult:
    kind: str
    input: str
    text: str
    data: object
    verdict: object = None

    def to_dict(self):
        return {'kind': self.kind, 'input': self.input, 'output': self.data, 'verdict': self.verdict}


@dataclass
class Report:
    dim: int
    results: list = field(default_factory=list)

    @property
    def assertions(self):
        return [r for r in self.results if r.kind == 'assert']

    @property
    def failures(self):
        return [r for r in self.assertions if r.verdict is False]

    @property
    def exit_code(self):
        return 1 if self.failures else 0

    def summary(self):
        return {
            'dim': self.dim,
            'statements': len(self.results),
            'assertions': len(self.assertions),
            'failures': len(self.failures),
            'verdict': 'FAIL' if self.failures else 'PASS',
        }

    def to_text(self):
        lines = []
        for number, result in enumerate(self.results, start=1):
            lines.append(f"[{number}] {result.input}")
            lines.extend('    ' + line for line in result.text.split('\n'))
        summary = self.summary()
        lines.append(
            f"résumé: {summary['statements']} instructions, {summary['assertions']} assertions, "
            f"{summary['failures']} échec(s) -> {summary['verdict']}"
        )
        return '\n'.join(lines) + '\n'

    def to_json(self):
        payload = {'statements': [r.to_dict() for r in self.results], 'summary': self.summary()}
        return json.dumps(payload, indent=2, ensure_ascii=False) + '\n'


class ScriptService:
    """
    Évaluateur de scripts.

    Args:
        dim: dimension demandée (--dim); None pour l'inférence seule
    """

    def __init__(self, dim=None):
        self.requested_dim = dim
        self.space = None
        self.env = {}

    def run(self, source):
        return self.evaluate(parse_script(source))

    def evaluate(self, script):
        self.space = Space(infer_dimension(script, self.requested_dim))
        self.env = {}
        report = Report(self.space.dim)
        for statement in script.statements:
            report.results.append(self._execute(statement))
        logger.info("Script évalué: %s", report.summary())
        return report

    def evaluate_expression(self, expr):
        self.space = Space(infer_dimension(expr, self.requested_dim))
        return self._eval(expr)

    # ------------------------------------------------------------------
    # Instructions
    # ------------------------------------------------------------------

    def _execute(self, statement):
        source = format_statement(statement)
        if isinstance(statement, Let):
            value = self._eval(statement.expr)
            self.env[statement.name] = value
            return StatementResult('let', source, describe(value.set), value.set.to_dict())
        if isinstance(statement, Show):
            value = self._eval(statement.expr)
            return StatementResult('show', source, describe(value.set), value.set.to_dict())
        if isinstance(statement, Assert):
            left = self._eval(statement.left).set
            right = self._eval(statement.right).set
            verdict = equal(left, right) if statement.op == '==' else is_subset(left, right)
            text = 'PASS' if verdict else 'FAIL'
            if not verdict:
                text += f"\n    gauche: {describe(left)}\n    droite: {describe(right)}"
            return StatementResult('assert', source, text, text.split('\n')[0], verdict)
        if isinstance(statement, OrbitStmt):
            orbit = enumerate_orbit(self._eval(statement.expr).set)
            return StatementResult('orbit', source, orbit.to_text(), orbit.to_dict())
        if isinstance(statement, MonoidStmt):
            words = [str(w) for w in enumerate_canonical(statement.mode)]
            text = f"{len(words)} mots: " + ', '.join(words)
            return StatementResult('monoid', source, text, {'mode': statement.mode, 'words': words})
        return self._separate(statement, source)

    def _separate(self, statement, source):
        left, right = self._eval(statement.left), self._eval(statement.right)
        for side, value in ((statement.left, left), (statement.right, right)):
            if value.hrep is None:
                raise DslSemanticError(
                    f"separate: {format_expr(side)} n'est pas convexe par construction", *side.pos)
        try:
            result = separate(left.hrep, right.hrep)
        except PreconditionError as exc:
            raise DslSemanticError(f"separate: {exc}", *statement.pos) from exc
        return StatementResult('separate', source, str(result), result.to_dict())

    # ------------------------------------------------------------------
    # Expressions
    # ------------------------------------------------------------------

    def _eval(self, expr):
        if isinstance(expr, Ref):
            if expr.name not in self.env:
                raise DslSemanticError(f"identifiant inconnu {expr.name!r}", *expr.pos)
            return self.env[expr.name]
        if isinstance(expr, Const):
            if expr.name == 'empty':
                return Value(empty_set(self.space), ConvexHRep.empty(self.space))
            return Value(full_set(self.space), ConvexHRep(self.space))
        if isinstance(expr, Call):
            if expr.fn in CONSTRUCTORS:
                return self._construct(expr)
            return self._apply(expr)
        raise DslSemanticError("argument numérique ou relation là où un ensemble est attendu", *expr.pos)

    def _apply(self, call):
        arity = len(call.args)
        if call.fn in ('union', 'inter') and arity < 2:
            raise DslSemanticError(f"{call.fn} attend au moins 2 arguments", *call.pos)
        if call.fn == 'diff' and arity != 2:
            raise DslSemanticError("diff attend 2 arguments", *call.pos)
        if call.fn in ('cmpl', 'lin', 'cor', 'cl', 'int') and arity != 1:
            raise DslSemanticError(f"{call.fn} attend 1 argument", *call.pos)
        values = [self._eval(arg) for arg in call.args]
        sets = [v.set for v in values]
        hreps = [v.hrep for v in values]

        if call.fn == 'union':
            return Value(fold(union, sets))
        if call.fn == 'inter':
            hrep = fold(ConvexHRep.intersection, hreps) if all(h is not None for h in hreps) else None
            return Value(fold(intersect, sets), hrep)
        if call.fn == 'diff':
            return Value(difference(*sets))
        if call.fn == 'cmpl':
            return Value(complement(sets[0]))
        hrep = hreps[0]
        if call.fn in ('lin', 'cl'):
            operator = lin if call.fn == 'lin' else topo_closure
            return Value(operator(sets[0]), lin_hrep(hrep) if hrep is not None else None)
        operator = cor if call.fn == 'cor' else topo_interior
        return Value(operator(sets[0]), cor_hrep(hrep) if hrep is not None else None)

    def _number(self, arg):
        if not isinstance(arg, Num):
            raise DslSemanticError("nombre rationnel attendu", *arg.pos)
        return arg.value

    def _relation(self, arg):
        if not isinstance(arg, Rel):
            raise DslSemanticError("relation (<, <=, =, >=, >) attendue", *arg.pos)
        return arg.op

    def _code(self, arg):
        if not isinstance(arg, Code) or arg.text not in ENDPOINT_CODES:
            raise DslSemanticError("code d'extrémités 'cc', 'co', 'oc' ou 'oo' attendu", *arg.pos)
        return arg.text

    def _construct(self, call):
        """Constructeurs convexes: chacun produit une liste de contraintes."""
        args = call.args
        dim = self.space.dim
        if call.fn == 'hs':
            coefficients = [self._number(a) for a in args[:dim]]
            if all(c == 0 for c in coefficients):
                raise DslSemanticError("hs: coefficients tous nuls", *call.pos)
            items = [(coefficients, self._relation(args[dim]), self._number(args[dim + 1]))]
        elif call.fn == 'pt':
            coordinates = [self._number(a) for a in args]
            items = [(_unit(k, dim), '=', c) for k, c in enumerate(coordinates)]
        elif call.fn == 'box':
            numbers = [self._number(a) for a in args]
            low, high = numbers[:dim], numbers[dim:]
            if any(l > h for l, h in zip(low, high)):
                raise DslSemanticError("box: bornes inversées", *call.pos)
            items = []
            for k in range(dim):
                items.extend([(_unit(k, dim), '>=', low[k]), (_unit(k, dim), '<=', high[k])])
        else:
            items = self._segment(call)
        hrep = ConvexHRep.from_constraints(self.space, items)
        return Value(hrep_to_flagged(hrep), hrep)

    def _segment(self, call):
        *numbers, code = call.args
        numbers = [self._number(a) for a in numbers]
        code = self._code(code)
        left = '>' if code[0] == 'o' else '>='
        right = '<' if code[1] == 'o' else '<='
        if self.space.dim == 1:
            p, q = numbers
            if p >= q:
                raise DslSemanticError("seg: il faut p < q", *call.pos)
            return [([1], left, p), ([1], right, q)]
        x1, y1, x2, y2 = numbers
        if (x1, y1) == (x2, y2):
            raise DslSemanticError("seg: extrémités confondues", *call.pos)
        normal = [y2 - y1, x1 - x2]
        direction = [x2 - x1, y2 - y1]
        return [
            (normal, '=', normal[0] * x1 + normal[1] * y1),
            (direction, left, direction[0] * x1 + direction[1] * y1),
            (direction, right, direction[0] * x2 + direction[1] * y2),
        ]


def _unit(k, dim):
    return [1 if i == k else 0 for i in range(dim)]


def run_script(source, dim=None):
    """
    Analyse et évalue un script.

    Raises:
        DslSyntaxError, DslSemanticError
    """
    service = ScriptService(dim)
    try:
        return service.run(source)
    except (DslSyntaxError, DslSemanticError):
        raise
    except KuraError as exc:
        raise DslSemanticError(str(exc)) from exc
