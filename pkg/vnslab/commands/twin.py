from vnslab.config import load_config
from vnslab.driver import twin_run


def twin(config: str, eps: float, horizon: float | None = None) -> dict:
    cfg = load_config(config)
    return twin_run(cfg, float(eps), None if horizon is None else float(horizon)).as_dict()


definition = {
    "type": "function",
    "function": {
        "name": "twin",
        "description": "Run the same particles with velocities u0 and u0 + eps*delta and report the stability gap Y(t) and max Y / eps^2.",
        "parameters": {
            "type": "object",
            "properties": {
                "config": {"type": "string", "description": "Path to a key = value experiment file"},
                "eps": {"type": "number", "description": "Perturbation size (>= 0)"},
                "horizon": {"type": "number", "description": "Final time (default: t_end from the config)"},
            },
            "required": ["config", "eps"],
        },
    },
}
