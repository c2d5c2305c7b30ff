from vnslab.config import load_config
from vnslab.driver import picard_local_solve


def picard(config: str, T: float | None = None) -> dict:
    cfg = load_config(config)
    return picard_local_solve(cfg, None if T is None else float(T)).as_dict()


definition = {
    "type": "function",
    "function": {
        "name": "picard",
        "description": "Picard iteration for the truncated coupled system on [0, T]. Reports the step conditions, iterate gaps, contraction factor and the gap to the coupled integrator.",
        "parameters": {
            "type": "object",
            "properties": {
                "config": {"type": "string", "description": "Path to a key = value experiment file"},
                "T": {"type": "number", "description": "Interval length (default: half the smallest step-condition bound)"},
            },
            "required": ["config"],
        },
    },
}
