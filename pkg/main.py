"""
Command-line entry point. Every subcommand prints one JSON document on stdout;
diagnostics and logs go to stderr.

Exit status: 0 success, 1 verification or internal-consistency failure,
2 usage error.
"""
import argparse
import json
import logging
import sys

from utils.settings import get_setting
from utils.validation import (
    CertificateError,
    EXPRESSION_GRAMMAR,
    GROUP_GRAMMAR,
    NonIntegralExponent,
    ValidationError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

COMMANDS = {
    "measure": "haar.measure",
    "integrate": "haar.integrate",
    "reduce": "haar.reduce",
    "spectrum": "haar.spectrum",
    "hull": "haar.hull",
    "mathieu": "haar.mathieu",
    "power-seq": "haar.power_sequence",
    "mc": "haar.monte_carlo",
    "quad": "haar.quadrature",
    "verify": "haar.verify",
}

# argparse destination -> JSON-RPC parameter
PARAMS = {
    "group": "group",
    "words": "words",
    "form_scale": "form_scale",
    "expr": "expr",
    "f": "f",
    "g": "g",
    "spectrum": "spectrum",
    "n_max": "n_max",
    "samples": "samples",
    "seed": "seed",
    "workers": "workers",
    "degree": "degree",
    "suite": "suite",
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("-o", "--output", help="write the JSON result to this file instead of stdout")

    group_args = argparse.ArgumentParser(add_help=False)
    group_args.add_argument("--group", required=True, help=GROUP_GRAMMAR)
    group_args.add_argument("--words", help="per-factor reduced words as JSON, e.g. '[[1,2,1]]'")

    expr_args = argparse.ArgumentParser(add_help=False)
    expr_args.add_argument("--expr", required=True, help=EXPRESSION_GRAMMAR)

    parser = argparse.ArgumentParser(
        prog="haar",
        description="Exact Haar integrals on compact Lie groups and Mathieu-conjecture experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    measure = sub.add_parser("measure", parents=[common, group_args], help="measure data of a group")
    measure.add_argument("--form-scale", dest="form_scale", help="positive rational rescaling of the form")

    sub.add_parser("integrate", parents=[common, group_args, expr_args], help="exact Haar integral")
    sub.add_parser("reduce", parents=[common, group_args, expr_args], help="square-root-free reduction")
    sub.add_parser("spectrum", parents=[common, group_args, expr_args], help="spectrum of the reduction")

    hull = sub.add_parser("hull", parents=[common], help="origin in the convex hull of a point set")
    hull.add_argument("--spectrum", required=True, help="points such as '[(1,0),(-1,0)]'")

    mathieu = sub.add_parser("mathieu", parents=[common, group_args], help="Mathieu report for f and g")
    mathieu.add_argument("--f", required=True, help=EXPRESSION_GRAMMAR)
    mathieu.add_argument("--g", help="second expression (default 1)")
    mathieu.add_argument("--n-max", dest="n_max", type=int, default=get_setting("mathieu", "n_max", 20))

    power = sub.add_parser("power-seq", parents=[common, group_args, expr_args], help="exact power integrals")
    power.add_argument("--n-max", dest="n_max", type=int, default=get_setting("mathieu", "n_max", 20))

    mc = sub.add_parser("mc", parents=[common, group_args, expr_args], help="Monte Carlo estimate")
    mc.add_argument("--samples", type=int)
    mc.add_argument("--seed", type=int)
    mc.add_argument("--workers", type=int)

    quad = sub.add_parser("quad", parents=[common, group_args, expr_args], help="product quadrature")
    quad.add_argument("--degree", type=int, help="degree budget (default: expression degree)")

    verify = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    verify.add_argument("--suite", default="all")
    verify.add_argument("--samples", type=int, help="Monte Carlo sample count for the monte-carlo suite")

    serve = sub.add_parser("serve", parents=[common], help="start the JSON-RPC service")
    serve.add_argument("--host", default=get_setting("service", "host", "0.0.0.0"))
    serve.add_argument("--port", type=int, default=get_setting("service", "port", 5000))

    return parser


def configure_logging(verbose):
    level = logging.DEBUG if verbose else str(get_setting("logging", "level", "WARNING")).upper()
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def emit(payload, output=None):
    text = json.dumps(payload, indent=2)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def error_payload(error: ValidationError):
    from mcp_server import SCHEMA

    return {"schema": SCHEMA, "success": False, "error": error.to_dict()}


def grammar_help(error: ValidationError):
    if error.field == "group":
        return f"group grammar: {GROUP_GRAMMAR}"
    if error.field in ("expr", "f", "g"):
        return f"expression grammar: {EXPRESSION_GRAMMAR}"
    return None


def serve(args):
    from app import app
    import routes  # noqa: F401

    app.run(host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    if args.command == "serve":
        return serve(args)

    from mcp_server import mcp_server

    params = {
        name: getattr(args, dest)
        for dest, name in PARAMS.items()
        if getattr(args, dest, None) is not None
    }

    try:
        result = mcp_server.call(COMMANDS[args.command], params)
    except NonIntegralExponent as e:
        logger.error(f"Internal consistency failure: {e.message}")
        emit(error_payload(e), args.output)
        return EXIT_FAILED
    except ValidationError as e:
        print(f"error: {e.message}", file=sys.stderr)
        help_text = grammar_help(e)
        if help_text:
            print(help_text, file=sys.stderr)
        emit(error_payload(e), args.output)
        return EXIT_USAGE
    except CertificateError as e:
        logger.error(f"Certificate check failed: {e}")
        emit(error_payload(ValidationError(str(e), code="CERTIFICATE_FAILED")), args.output)
        return EXIT_FAILED

    emit(result, args.output)
    if args.command == "verify" and not result.get("passed"):
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
