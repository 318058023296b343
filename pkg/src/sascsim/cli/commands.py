"""Implementations of the sascsim sub-commands; each takes resolved params."""

import json
import logging
import shutil
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from tqdm import tqdm

from sascsim.annotations.manifest import duration_histogram, load_manifest
from sascsim.annotations.rttm import parse_rttm
from sascsim.annotations.segment_json import parse_segment_json
from sascsim.cli.run_record import write_run_record
from sascsim.density.curves import Grid, model_curves, posterior_curves
from sascsim.density.stats_model import DensityParams, ModelMode, StatsModel, fit_stats_model
from sascsim.errors import ConfigurationError, ValidationError
from sascsim.metrics.bootstrap import bootstrap_compare_errors
from sascsim.metrics.error_rates import METRIC_NAMES, relative_gain, report_from_errors, score_pair
from sascsim.metrics.transcripts import align_pairs, read_pairs, read_transcripts
from sascsim.render.chunker import chunk_dialogue
from sascsim.render.config import RenderConfig
from sascsim.render.ground_truth import (
    dumps_corpus_manifest,
    load_rendered,
    write_chunks,
    write_dialogue_outputs,
)
from sascsim.render.mixer import UtteranceAudioSource, render_plan
from sascsim.render.rir import RoomSet, assign_rirs, load_roomset, rir_rng
from sascsim.simulate.config import SimulationConfig, SimulationMode
from sascsim.simulate.corpus import simulate_corpus
from sascsim.simulate.plan import DialoguePlan
from sascsim.stats.gaps import extract_corpus_gaps, overlap_ratio

logger = logging.getLogger(__name__)


def _read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_annotations(paths, annotation_format: str):
    annotations = []
    for path in paths:
        path = Path(path)
        kind = annotation_format
        if kind == "auto":
            kind = "rttm" if path.suffix.lower() == ".rttm" else "json"
        text = _read_text(path)
        annotations.extend(parse_rttm(text) if kind == "rttm" else parse_segment_json(text))
    ids = [a.conversation_id for a in annotations]
    if len(ids) != len(set(ids)):
        raise ValidationError("conversation ids repeat across annotation files")
    return annotations


def cmd_extract_stats(params: dict) -> int:
    annotations = _load_annotations(params["annotations"], params["format"])
    density_params = DensityParams(
        alpha=params["alpha"],
        eps_mu=params["eps_mu"],
        eps_r=params["eps_r"],
        eps_d=params["eps_d"],
        min_obs=params["min_obs"],
        speaker_scope=params["speaker_scope"],
    )
    transition = None
    if params["transitions_from"]:
        transition = StatsModel.from_json(_read_text(params["transitions_from"])).transition

    model = fit_stats_model(
        annotations,
        ModelMode(params["mode"]),
        density_params,
        transition=transition,
        source=params["source"],
    )
    output = Path(params["output"])
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(model.to_json() + "\n", encoding="utf-8")
    write_run_record(output.parent, "extract-stats", params)

    observations = extract_corpus_gaps(annotations, density_params.speaker_scope)
    speakers = {obs.incoming_speaker for obs in observations}
    print(f"conversations:  {len(annotations)}")
    print(f"speakers:       {len(speakers)}")
    print(f"observations:   {len(observations)}")
    print(f"overlap ratio:  {overlap_ratio(observations):.4f}")
    for kind, counts in model.meta["counts"].items():
        print(f"{kind:>5}: {counts['speakers']} speaker means, {counts['residuals']} residuals")
    states = model.transition.states
    for i, state in enumerate(states):
        row = "  ".join(
            f"P({state}->{other})={model.transition.probs[i, j]:.3f}"
            for j, other in enumerate(states)
        )
        print(row)
    return 0


def cmd_simulate(params: dict) -> int:
    mode = SimulationMode(params["mode"])
    config = SimulationConfig(
        mode=mode,
        pairs_limit=params["pairs"],
        seed=params["seed"],
        d_min=params["d_min"],
        d_max=params["d_max"],
        fixed_gap=params["fixed_gap"],
        clamp_min_start_delta=params["clamp_min_start_delta"],
        max_pair_retries=params["max_pair_retries"],
        workers=params["workers"],
    )
    model = None
    if params["stats"]:
        model = StatsModel.from_json(_read_text(params["stats"]))
    elif mode.get_model_mode() is not None:
        raise ConfigurationError(f"--stats is required for mode {mode.value}")

    pool = load_manifest(_read_text(params["manifest"]))
    corpus = simulate_corpus(pool, model, config, params["real_hours"], progress=True)

    out = Path(params["out"])
    plan_dir = out / "plans"
    if plan_dir.exists():
        shutil.rmtree(plan_dir)
    plan_dir.mkdir(parents=True)
    for plan in corpus.plans:
        (plan_dir / f"{plan.dialogue_id}.json").write_text(plan.to_json() + "\n", encoding="utf-8")
    summary = corpus.summary.to_dict()
    (out / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    write_run_record(out, "simulate", params)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _plan_files(path: Path) -> list[Path]:
    if path.is_file():
        return [path]
    if (path / "plans").is_dir():
        path = path / "plans"
    files = sorted(path.glob("*.json"))
    if not files:
        raise ConfigurationError(f"no plan files found in {path}")
    return files


def cmd_render(params: dict) -> int:
    render_config = RenderConfig(
        sample_rate=params["sample_rate"],
        rir_fraction=params["rir_fraction"],
        window=params["window"],
        peak_target=params["peak_target"],
    )
    manifest_path = Path(params["manifest"])
    pool = load_manifest(_read_text(manifest_path))
    audio_root = Path(params["audio_root"]) if params["audio_root"] else manifest_path.parent
    source = UtteranceAudioSource(pool, audio_root)
    roomset = load_roomset(params["rir_dir"]) if params["rir_dir"] else RoomSet()
    plans = [DialoguePlan.from_json(_read_text(p)) for p in _plan_files(Path(params["plans"]))]
    out = Path(params["out"])

    def render_one(plan: DialoguePlan) -> dict:
        assignment = assign_rirs(
            plan, roomset, rir_rng(plan.seed), render_config.rir_fraction
        )
        rendered = render_plan(
            plan,
            source,
            assignment,
            sample_rate=render_config.sample_rate,
            peak_target=render_config.peak_target,
        )
        chunks = chunk_dialogue(rendered, render_config.window)
        return write_dialogue_outputs(out, rendered, chunks)

    with ThreadPoolExecutor(max_workers=params["workers"]) as executor:
        futures = [executor.submit(render_one, plan) for plan in plans]
        records = [
            future.result()
            for future in tqdm(futures, desc="rendering", unit="dlg")
        ]

    (out / "corpus.json").write_text(dumps_corpus_manifest(records) + "\n", encoding="utf-8")
    write_run_record(out, "render", params)
    applied = sum(record["rir_applied"] for record in records)
    print(f"rendered {len(records)} dialogues into {out} ({applied} with RIR)")
    return 0


def cmd_chunk(params: dict) -> int:
    rendered_dir = Path(params["rendered"])
    out = Path(params["out"]) if params["out"] else rendered_dir
    dialogue_dirs = sorted(
        p for p in rendered_dir.iterdir() if (p / "audio.wav").is_file()
    ) if rendered_dir.is_dir() else []
    if not dialogue_dirs:
        raise ConfigurationError(f"no rendered dialogues found in {rendered_dir}")

    total = 0
    for dialogue_dir in dialogue_dirs:
        rendered = load_rendered(dialogue_dir)
        chunks = chunk_dialogue(rendered, params["window"])
        target = out / rendered.dialogue_id
        if (target / "chunks").is_dir():
            shutil.rmtree(target / "chunks")
        write_chunks(target, chunks)
        total += len(chunks)
    write_run_record(out, "chunk", params)
    print(f"wrote {total} chunks for {len(dialogue_dirs)} dialogues")
    return 0


def _load_systems(params: dict) -> tuple[list[str], list[list]]:
    if params["pairs_file"]:
        return [params["pairs_file"]], [read_pairs(params["pairs_file"])]
    if not params["ref"] or not params["hyp"]:
        raise ConfigurationError("evaluate needs --ref and --hyp, or --pairs-file")
    if len(params["hyp"]) > 2:
        raise ConfigurationError("evaluate compares at most two hypothesis files")
    references = read_transcripts(params["ref"])
    return params["hyp"], [align_pairs(references, read_transcripts(h)) for h in params["hyp"]]


def cmd_evaluate(params: dict) -> int:
    metrics = params["metrics"]
    unknown = [m for m in metrics if m not in METRIC_NAMES]
    if unknown:
        raise ConfigurationError(f"unknown metrics {unknown}; choose from {METRIC_NAMES}")

    names, systems = _load_systems(params)
    errors = [[score_pair(pair) for pair in pairs] for pairs in systems]
    reports = [report_from_errors(e) for e in errors]
    result = {
        "systems": [
            {"hypothesis": str(name), **report.to_dict(metrics)}
            for name, report in zip(names, reports)
        ]
    }
    if len(reports) == 2:
        result["relative_gain"] = relative_gain(reports[0], reports[1], metrics)
        if params["bootstrap"] > 0:
            result["bootstrap"] = [
                bootstrap_compare_errors(
                    errors[0], errors[1], metric, params["bootstrap"], params["alpha"], params["seed"]
                ).to_dict()
                for metric in metrics
            ]

    text = json.dumps(result, indent=2, sort_keys=True)
    record_dir = Path(".")
    if params["out"]:
        out = Path(params["out"])
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
        record_dir = out.parent
    write_run_record(record_dir, "evaluate", params)
    if params["per_pair_csv"]:
        Path(params["per_pair_csv"]).write_text(reports[0].to_csv(), encoding="utf-8")
    print(text)
    return 0


def cmd_inspect_stats(params: dict) -> int:
    model = StatsModel.from_json(_read_text(params["stats"]))
    grid = Grid.parse(params["grid"])
    out = Path(params["out"])
    out.mkdir(parents=True, exist_ok=True)

    curves = model_curves(model, grid, params["d_star"])
    if params["posterior"] > 0:
        curves += posterior_curves(
            model, params["posterior"], np.random.default_rng(params["seed"]), grid
        )
    for curve in curves:
        (out / f"{curve.name}.csv").write_text(curve.to_csv(), encoding="utf-8")
        logger.info("%s: integral %.4f", curve.name, curve.integral())
    (out / "transition.json").write_text(
        json.dumps(model.transition.to_dict(), indent=2) + "\n", encoding="utf-8"
    )

    histogram = None
    if params["manifest"]:
        pool = load_manifest(_read_text(params["manifest"]))
        histogram = duration_histogram(pool.durations(), params["bin_width"])
        edges, counts = histogram
        lines = ["bin_start,bin_end,count"] + [
            f"{lo!r},{hi!r},{int(n)}" for lo, hi, n in zip(edges[:-1], edges[1:], counts)
        ]
        (out / "duration_histogram.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    if params["plot"]:
        # matplotlib is only imported when figures are requested
        from sascsim.density.plot import plot_curves, plot_histogram

        plot_curves([c for c in curves if c.name.startswith("mean_")], out / "mean_gaps.png")
        plot_curves([c for c in curves if c.name.startswith("residual_")], out / "residuals.png")
        if params["posterior"] > 0:
            plot_curves(
                [c for c in curves if c.name.startswith("posterior_")], out / "posterior_gaps.png"
            )
        if histogram is not None:
            plot_histogram(*histogram, out / "duration_histogram.png")

    write_run_record(out, "inspect-stats", params)
    print(f"wrote {len(curves)} density curves to {out}")
    return 0


HANDLERS = {
    "extract-stats": cmd_extract_stats,
    "simulate": cmd_simulate,
    "render": cmd_render,
    "chunk": cmd_chunk,
    "evaluate": cmd_evaluate,
    "inspect-stats": cmd_inspect_stats,
}
