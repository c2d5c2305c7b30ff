from vnslab.config import load_config
from vnslab.driver import run as run_coupled


def run(config: str) -> dict:
    cfg = load_config(config)
    result = run_coupled(cfg)
    summary = result.summary
    return {
        "status": summary["status"],
        "output_dir": str(result.output_dir),
        "records": len(result.records),
        "t_final": result.state.t,
        "initial": summary.get("initial"),
        "fits": summary.get("fits"),
        "lyapunov": summary.get("lyapunov"),
        "e0_nonincreasing": summary.get("e0_nonincreasing"),
        "energy_residual_max": summary.get("energy_residual_max"),
        "mass_drift": summary.get("mass_drift"),
    }


definition = {
    "type": "function",
    "function": {
        "name": "run",
        "description": "Run the coupled particle/fluid simulation described by a config file. Writes series.csv, summary.json and the final snapshots to the output directory.",
        "parameters": {
            "type": "object",
            "properties": {
                "config": {"type": "string", "description": "Path to a key = value experiment file"},
            },
            "required": ["config"],
        },
    },
}
