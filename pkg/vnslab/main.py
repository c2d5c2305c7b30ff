import argparse
import logging.config
import os
import sys

from dotenv import load_dotenv

load_dotenv()

_log_config = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "default": {"class": "logging.StreamHandler", "formatter": "default", "stream": "ext://sys.stderr"},
    },
    "loggers": {
        "vnslab": {
            "handlers": ["default"],
            "level": (os.getenv("VNS_LOG_LEVEL") or "INFO").upper(),
            "propagate": False,
        },
    },
}
logging.config.dictConfig(_log_config)

from vnslab import __version__
from vnslab.commands import COMMAND_DEFINITIONS, dispatch_command

_TYPES = {"number": float, "integer": int, "string": str}


def build_parser() -> argparse.ArgumentParser:
    """One subcommand per command definition. The first required property is positional."""
    parser = argparse.ArgumentParser(prog="vns", description="Vlasov-Navier-Stokes simulation lab")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for definition in COMMAND_DEFINITIONS:
        spec = definition["function"]
        command = sub.add_parser(spec["name"].replace("_", "-"), help=spec["description"],
                                 description=spec["description"])
        command.set_defaults(handler=spec["name"])
        params = spec["parameters"]
        required = params.get("required", [])
        for name, prop in params["properties"].items():
            kind = _TYPES[prop["type"]]
            if required and name == required[0]:
                command.add_argument(name, type=kind, help=prop["description"])
            else:
                command.add_argument(f"--{name}", dest=name, type=kind, required=name in required,
                                     default=prop.get("default"), help=prop["description"])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    namespace = vars(parser.parse_args(argv))
    name = namespace.pop("handler")
    namespace.pop("command")
    args = {key: value for key, value in namespace.items() if value is not None}
    code, report = dispatch_command(name, args)
    sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
