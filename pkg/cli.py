# -*- coding: utf-8 -*-
"""
Ligne de commande kura
======================
    kura run FILE [--json] [--dim N]
    kura orbit -e EXPR [--dim N] [--json]
    kura monoid --mode general|convex [--max-len K] [--table] [--json]
    kura separate --s FILE --t FILE [--json]
    kura selftest [--seeds N] [--rng SEED] [--json]

Codes de sortie: 0 succès, 1 assertion ou autotest en échec,
2 erreur de syntaxe ou d'usage, 3 erreur sémantique.
"""

import argparse
import json
import logging
import sys

from config import Config, configure_logging, resolve_rng_seed
from dsl_service import ScriptService, parse_expression, parse_script
from errors import DslError, KuraError
from monoid_service import MODES, enumerate_canonical, monoid_table
from orbit_service import enumerate_orbit
from selftest_service import SelftestService
from separation_service import ConvexHRep, separate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_SEMANTIC = 3


def build_parser():
    parser = argparse.ArgumentParser(prog='kura', description="Moteur d'opérateurs cor / lin")
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help="exécute un script .kura")
    run.add_argument('file')
    run.add_argument('--json', action='store_true')
    run.add_argument('--dim', type=int, choices=(1, 2))

    orbit = commands.add_parser('orbit', help="orbite d'une expression sous f et g")
    orbit.add_argument('-e', '--expr', required=True)
    orbit.add_argument('--dim', type=int, choices=(1, 2))
    orbit.add_argument('--json', action='store_true')

    monoid = commands.add_parser('monoid', help="formes canoniques du monoïde")
    monoid.add_argument('--mode', choices=MODES, default='general')
    monoid.add_argument('--max-len', type=int, default=Config.MONOID_MAX_LEN)
    monoid.add_argument('--table', action='store_true', help="affiche la table de composition")
    monoid.add_argument('--json', action='store_true')

    sep = commands.add_parser('separate', help="sépare deux convexes en représentation H")
    sep.add_argument('--s', required=True, dest='s_file')
    sep.add_argument('--t', required=True, dest='t_file')
    sep.add_argument('--json', action='store_true')

    selftest = commands.add_parser('selftest', help="rejoue les critères d'acceptation")
    selftest.add_argument('--seeds', type=int, default=Config.SELFTEST_SEEDS)
    selftest.add_argument('--rng', type=int, default=None)
    selftest.add_argument('--json', action='store_true')
    return parser


def _read(path):
    with open(path, encoding='utf-8') as handle:
        return handle.read()


def cmd_run(args, out):
    report = ScriptService(args.dim).evaluate(parse_script(_read(args.file)))
    out.write(report.to_json() if args.json else report.to_text())
    return report.exit_code


def cmd_orbit(args, out):
    value = ScriptService(args.dim).evaluate_expression(parse_expression(args.expr))
    orbit = enumerate_orbit(value.set)
    if args.json:
        out.write(json.dumps(orbit.to_dict(), indent=2, ensure_ascii=False) + '\n')
    else:
        out.write(orbit.to_text() + '\n')
    return EXIT_OK


def cmd_monoid(args, out):
    if args.table:
        table = monoid_table(args.mode, args.max_len)
        if args.json:
            out.write(json.dumps(table.to_dict(), indent=2, ensure_ascii=False) + '\n')
        else:
            out.write(table.to_text() + '\n')
        return EXIT_OK
    words = [str(w) for w in enumerate_canonical(args.mode, args.max_len)]
    if args.json:
        out.write(json.dumps({'mode': args.mode, 'words': words}, ensure_ascii=False) + '\n')
    else:
        out.write(f"{args.mode}: {len(words)} mots\n" + ''.join(w + '\n' for w in words))
    return EXIT_OK


def cmd_separate(args, out):
    s = ConvexHRep.from_json(json.loads(_read(args.s_file)))
    t = ConvexHRep.from_json(json.loads(_read(args.t_file)))
    result = separate(s, t)
    if args.json:
        out.write(json.dumps(result.to_dict(), ensure_ascii=False) + '\n')
    else:
        out.write(f"{result}\n")
    return EXIT_OK


def cmd_selftest(args, out):
    summary = SelftestService(args.seeds, resolve_rng_seed(args.rng)).run()
    out.write(summary.to_json() if args.json else summary.to_text())
    return EXIT_OK if summary.passed else EXIT_FAILED


COMMANDS = {
    'run': cmd_run,
    'orbit': cmd_orbit,
    'monoid': cmd_monoid,
    'separate': cmd_separate,
    'selftest': cmd_selftest,
}


def run_cli(argv=None, out=None):
    """
    Point d'entrée testable: retourne le code de sortie au lieu de quitter.
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        return COMMANDS[args.command](args, out)
    except DslError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"❌ Lecture impossible: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KuraError, ValueError, KeyError) as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


def main():
    configure_logging()
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
