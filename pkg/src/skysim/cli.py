"""Command-line interface.

Subcommands: run (one corrective loop), simulate (one observation),
bench (full sweep with CSV/table/figure reports), ablate (prompt-component
ablation sweep), oracle (interpret a code file and print its transitions),
dataset validate.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline, prompts
from .bench import dataset as dataset_mod
from .bench import runner as runner_mod
from .interpreter import DroneState, DslError, execute, parse, render_numerical, render_semantic
from .llm_roles import ObservationSource
from .pipeline import MethodConfig, load_config


def _config_from_args(args, method: str | None = None) -> MethodConfig:
    if getattr(args, "config", None):
        return load_config(args.config, method=method)
    if method:
        return MethodConfig(simulation_backend=method)
    return MethodConfig()


def cmd_run(args) -> int:
    task = Path(args.task_file).read_text(encoding="utf-8").strip()
    config = _config_from_args(args, args.method)
    result = pipeline.run_task(task, config)
    print(f"status: {result.status}")
    print(f"iterations: {result.iterations_used}")
    for i, it in enumerate(result.iterations, start=1):
        verdict = "MATCH" if it.verdict.match else "MISMATCH"
        print(f"  round {i}: {verdict}")
        if it.verdict.feedback:
            print("    " + it.verdict.feedback.replace("\n", "\n    "))
    print("final code:")
    print(result.final_code.rstrip())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "final_code.py").write_text(result.final_code, encoding="utf-8")
        history = [
            {
                "code": it.code,
                "observation": it.observation.prose,
                "match": it.verdict.match,
                "feedback": it.verdict.feedback,
            }
            for it in result.iterations
        ]
        (out / "loop.json").write_text(json.dumps(history, indent=2), encoding="utf-8")
    return 0 if result.status == "accepted" else 1


def cmd_simulate(args) -> int:
    code = Path(args.code).read_text(encoding="utf-8")
    config = _config_from_args(args, args.backend)
    observation = pipeline.observe(code, config)
    print(observation.prose)
    if observation.structured is not None and observation.source != ObservationSource.NONE:
        rows = ", ".join(str([v for v in t.as_list()]) for t in observation.structured)
        print(f"TRANSITIONS: [{rows}]")
    return 0


def cmd_bench(args) -> int:
    tasks = dataset_mod.load_tasks(args.dataset)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    configs = {}
    for method in methods:
        config = _config_from_args(args, method)
        configs[pipeline.canonical_method(method)] = config
    report = runner_mod.run_benchmark(tasks, configs, repetitions=args.reps)
    paths = runner_mod.write_report(report, args.out, figures=not args.no_figures)
    print(report.to_table())
    print(f"\nwrote {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_ablate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    configurations = []
    rendered = {}
    for label, mask in prompts.ABLATION_MASKS.items():
        bundle = prompts.default_bundle("simulator", ablation=mask)
        text = prompts.build_simulator_prompt(bundle)
        path = out / f"simulator_prompt_{label}.txt"
        path.write_text(text + "\n", encoding="utf-8")
        rendered[label] = text
        configurations.append(
            {"label": label, "omitted": sorted(mask), "prompt_file": path.name}
        )
    (out / "ablation_manifest.json").write_text(
        json.dumps({"configurations": configurations}, indent=2) + "\n", encoding="utf-8"
    )
    full = rendered["full"]
    for label, text in rendered.items():
        if not prompts.is_subsequence(text, full):
            print(f"ablation invariant violated for {label}", file=sys.stderr)
            return 2
    print(f"wrote {len(configurations)} configurations to {out}")
    if args.run:
        if not args.dataset or not args.config:
            print("--run needs --dataset and --config", file=sys.stderr)
            return 2
        tasks = dataset_mod.load_tasks(args.dataset)
        configs = {}
        for label, mask in prompts.ABLATION_MASKS.items():
            config = load_config(args.config, method="llm_sim")
            config.bundles = pipeline.RoleBundles.defaults(ablation=mask)
            configs[label] = config
        report = runner_mod.run_benchmark(tasks, configs, repetitions=args.reps)
        runner_mod.write_report(report, out, figures=not args.no_figures)
        print(report.to_table())
    return 0


def cmd_oracle(args) -> int:
    code = Path(args.code).read_text(encoding="utf-8")
    try:
        program = parse(code)
    except DslError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    trace = execute(
        program,
        initial=DroneState.initial(airborne=args.airborne),
        h_takeoff=args.h_takeoff,
    )
    for t in trace.transitions:
        print([v for v in t.as_list()])
    print()
    print(render_numerical(trace) if args.numerical else render_semantic(trace))
    if trace.faults:
        print("\nfaults:")
        for f in trace.faults:
            print(f"  line {f.span.line}: {f.kind.value}: {f.message}")
    if args.json:
        Path(args.json).write_text(trace.to_json(indent=2) + "\n", encoding="utf-8")
        print(f"\nwrote {args.json}")
    if args.plot:
        from .bench.figures import save_trajectory_figure

        save_trajectory_figure(trace, args.plot, title=Path(args.code).name)
        print(f"wrote {args.plot}")
    return 0


def cmd_dataset_validate(args) -> int:
    problems = dataset_mod.validate(args.dataset)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    tasks = dataset_mod.load_tasks(args.dataset)
    print(f"{args.dataset}: {len(tasks)} tasks, all valid")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skysim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the corrective loop for one task")
    p.add_argument("--task-file", required=True, help="text file holding the task description")
    p.add_argument("--method", default=None, help="simulation backend or alias (direct/numerical/semantic/llm)")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--out", default=None, help="directory for final code and loop history")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="produce one observation for a code file")
    p.add_argument("--code", required=True)
    p.add_argument("--backend", default="oracle_semantic")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="run the benchmark sweep and write reports")
    p.add_argument("--dataset", default=str(dataset_mod.DEFAULT_DATASET))
    p.add_argument("--methods", default="direct,numerical,semantic,llm")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ablate", help="emit the four prompt-ablation configurations")
    p.add_argument("--dataset", default=str(dataset_mod.DEFAULT_DATASET))
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--run", action="store_true", help="also run the sweep per configuration")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("oracle", help="interpret a code file: transitions plus narration")
    p.add_argument("--code", required=True)
    p.add_argument("--h-takeoff", type=float, default=2.5)
    p.add_argument("--airborne", action="store_true", help="start from hover instead of the ground")
    p.add_argument("--numerical", action="store_true", help="print the numerical rendering")
    p.add_argument("--json", default=None, help="also export the trace as JSON to this path")
    p.add_argument("--plot", default=None, help="also save a trajectory figure to this path")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dataset", help="dataset utilities")
    dsub = p.add_subparsers(dest="dataset_command", required=True)
    v = dsub.add_parser("validate", help="validate a task dataset file")
    v.add_argument("--dataset", default=str(dataset_mod.DEFAULT_DATASET))
    v.set_defaults(func=cmd_dataset_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
