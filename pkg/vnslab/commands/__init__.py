import logging

import yaml

from vnslab.diagnostics import to_plain
from vnslab.errors import EXIT_CONFIG, EXIT_OK, NumericalAbort, VnsError, exit_code_for

from .fit import definition as fit_def, fit
from .heat_decay import SAMPLES as HEAT_SAMPLES, definition as heat_decay_def, heat_decay
from .picard import definition as picard_def, picard
from .run import definition as run_def, run
from .twin import definition as twin_def, twin

log = logging.getLogger(__name__)

COMMAND_DEFINITIONS = [
    run_def,
    twin_def,
    picard_def,
    heat_decay_def,
    fit_def,
]


def to_yaml(report: dict) -> str:
    return yaml.dump(to_plain(report), allow_unicode=True, sort_keys=False)


def dispatch_command(name: str, args: dict) -> tuple[int, str]:
    """Route a command to its handler. Returns (exit code, YAML report)."""
    handlers = {
        "run": lambda a: run(a["config"]),
        "twin": lambda a: twin(a["config"], a["eps"], a.get("horizon")),
        "picard": lambda a: picard(a["config"], a.get("T")),
        "heat_decay": lambda a: heat_decay(a["config"], a.get("samples") or HEAT_SAMPLES),
        "fit": lambda a: fit(a["series"], a.get("column") or "E0", a.get("window")),
    }

    handler = handlers.get(name)
    if not handler:
        return EXIT_CONFIG, to_yaml({"error": f"Unknown command: {name}"})

    try:
        return EXIT_OK, to_yaml(handler(args))
    except NumericalAbort as e:
        return exit_code_for(e), to_yaml({"error": str(e), "reason": e.reason})
    except VnsError as e:
        return exit_code_for(e), to_yaml({"error": str(e)})
    except Exception as e:
        log.exception("Command %s failed", name)
        return exit_code_for(e), to_yaml({"error": str(e)})
