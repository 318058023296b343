# pylint: disable=redefined-outer-name
import json

import numpy as np
import pytest

from sascsim import __version__
from sascsim.annotations.manifest import UtteranceEntry, UtterancePool, write_manifest
from sascsim.annotations.rttm import write_rttm
from sascsim.cli.app import run_cli
from sascsim.errors import InternalInvariantError
from sascsim.render.wav_io import AudioBuffer, write_wav_file

RATE = 8000


@pytest.fixture
def workspace(tmp_path, synthetic_corpus):
    """Annotations, a manifest and its audio for a tiny end-to-end run."""
    rttm = tmp_path / "real.rttm"
    rttm.write_text(
        "".join(write_rttm(c) for c in synthetic_corpus(n_conversations=20, seed=70)),
        encoding="utf-8",
    )

    rng = np.random.default_rng(71)
    entries = []
    for i in range(6):
        speaker = f"spk{i}"
        for k in range(5):
            duration = 2.0 + 0.25 * k
            audio_path = f"audio/{speaker}_{k}.wav"
            samples = rng.uniform(-0.2, 0.2, size=int(duration * RATE))
            write_wav_file(AudioBuffer(samples, RATE), tmp_path / audio_path)
            entries.append(
                UtteranceEntry(speaker, f"{speaker}_{k}", audio_path, duration, k, f"{speaker} mondja {k}")
            )
    manifest = tmp_path / "manifest.json"
    manifest.write_text(write_manifest(UtterancePool.from_entries(entries)), encoding="utf-8")
    return tmp_path


def _extract(workspace, mode="sasc"):
    model = workspace / "stats" / f"{mode}.json"
    code = run_cli(
        [
            "extract-stats",
            "--annotations", str(workspace / "real.rttm"),
            "--mode", mode,
            "--output", str(model),
            "--source", "synthetic",
        ]
    )
    assert code == 0
    return model


def _simulate(workspace, model, out, *extra):
    return run_cli(
        [
            "simulate",
            "--manifest", str(workspace / "manifest.json"),
            "--stats", str(model),
            "--seed", "11",
            "--out", str(out),
            *extra,
        ]
    )


def _render(workspace, plans, out):
    return run_cli(
        [
            "render",
            "--plans", str(plans),
            "--manifest", str(workspace / "manifest.json"),
            "--sample-rate", str(RATE),
            "--window", "5",
            "--out", str(out),
        ]
    )


def test_extract_stats(workspace, capsys):
    model = _extract(workspace)
    data = json.loads(model.read_text(encoding="utf-8"))
    assert data["mode"] == "sasc"
    assert data["meta"]["source"] == "synthetic"
    assert "overlap ratio" in capsys.readouterr().out
    run = json.loads((model.parent / "run.json").read_text(encoding="utf-8"))
    assert run["command"] == "extract-stats"
    assert run["version"] == __version__


def test_pipeline_is_deterministic(workspace):
    model = _extract(workspace)
    for name in ("a", "b"):
        assert _simulate(workspace, model, workspace / f"sim_{name}") == 0
        assert _render(workspace, workspace / f"sim_{name}", workspace / f"out_{name}") == 0

    plans = sorted(p.name for p in (workspace / "sim_a" / "plans").iterdir())
    assert plans == ["dialogue_00000.json", "dialogue_00001.json", "dialogue_00002.json"]
    for name in plans:
        first = (workspace / "sim_a" / "plans" / name).read_bytes()
        assert first == (workspace / "sim_b" / "plans" / name).read_bytes()
    for dialogue in ("dialogue_00000", "dialogue_00001", "dialogue_00002"):
        for artefact in ("audio.wav", "ref.rttm", "segments.json", "transcripts.tsv"):
            first = (workspace / "out_a" / dialogue / artefact).read_bytes()
            assert first == (workspace / "out_b" / dialogue / artefact).read_bytes()
    corpus = json.loads((workspace / "out_a" / "corpus.json").read_text(encoding="utf-8"))
    assert [r["dialogue_id"] for r in corpus] == ["dialogue_00000", "dialogue_00001", "dialogue_00002"]


def test_csasc_and_baselines(workspace):
    model = _extract(workspace, "csasc")
    assert _simulate(workspace, model, workspace / "csasc", "--mode", "csasc") == 0
    assert run_cli(
        [
            "simulate",
            "--manifest", str(workspace / "manifest.json"),
            "--mode", "nosim",
            "--out", str(workspace / "nosim"),
        ]
    ) == 0
    summary = json.loads((workspace / "nosim" / "summary.json").read_text(encoding="utf-8"))
    assert summary["dialogues"] == 30
    assert summary["mean_utterances_per_dialogue"] == 1.0


def test_config_file_and_overrides(workspace):
    model = _extract(workspace)
    assert _simulate(workspace, model, workspace / "first", "--pairs", "2") == 0
    code = run_cli(
        [
            "simulate",
            "--config", str(workspace / "first" / "run.json"),
            "--seed", "12",
            "--out", str(workspace / "second"),
        ]
    )
    assert code == 0
    params = json.loads((workspace / "second" / "run.json").read_text(encoding="utf-8"))["params"]
    assert params["seed"] == 12
    assert params["pairs"] == 2
    assert params["stats"] == str(model)


def test_chunk_and_evaluate(workspace, capsys):
    model = _extract(workspace)
    _simulate(workspace, model, workspace / "sim")
    _render(workspace, workspace / "sim", workspace / "out")
    assert run_cli(["chunk", "--rendered", str(workspace / "out"), "--window", "10"]) == 0

    reference = workspace / "out" / "dialogue_00000" / "transcripts.tsv"
    lines = reference.read_text(encoding="utf-8").splitlines()
    hypothesis = workspace / "hyp.tsv"
    hypothesis.write_text(
        "".join(line.rsplit("\t", 1)[0] + "\tvalami más\n" for line in lines), encoding="utf-8"
    )
    report_path = workspace / "eval" / "report.json"
    capsys.readouterr()
    code = run_cli(
        [
            "evaluate",
            "--ref", str(reference),
            "--hyp", str(reference), str(hypothesis),
            "--bootstrap", "50",
            "--out", str(report_path),
            "--per-pair-csv", str(workspace / "eval" / "pairs.csv"),
        ]
    )
    assert code == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["systems"][0]["wer"] == 0.0
    assert report["systems"][1]["wer"] > 0.0
    assert {b["metric"] for b in report["bootstrap"]} == {"wer", "cer", "cpwer", "cpcer", "sc_acc"}
    assert (workspace / "eval" / "pairs.csv").is_file()


def test_inspect_stats(workspace):
    model = _extract(workspace, "csasc")
    out = workspace / "inspect"
    code = run_cli(
        [
            "inspect-stats",
            "--stats", str(model),
            "--out", str(out),
            "--d-star", "2,6",
            "--manifest", str(workspace / "manifest.json"),
            "--posterior", "2000",
            "--plot",
        ]
    )
    assert code == 0
    for name in ("mean_same.csv", "residual_diff_d6.csv", "posterior_diff.csv",
                 "transition.json", "duration_histogram.csv", "residuals.png"):
        assert (out / name).is_file()
    rows = (out / "mean_same.csv").read_text(encoding="utf-8").splitlines()
    x, y = np.array([[float(v) for v in row.split(",")] for row in rows[1:]]).T
    assert np.trapezoid(y, x) == pytest.approx(1.0, abs=1e-2)


def test_missing_model_is_an_input_error(workspace):
    code = run_cli(
        ["simulate", "--manifest", str(workspace / "manifest.json"), "--out", str(workspace / "x")]
    )
    assert code == 2


def test_missing_file_is_an_input_error(workspace):
    code = run_cli(
        ["extract-stats", "--annotations", str(workspace / "nope.rttm"),
         "--output", str(workspace / "m.json")]
    )
    assert code == 2


def test_missing_required_option(workspace):
    assert run_cli(["extract-stats", "--annotations", str(workspace / "real.rttm")]) == 2


def test_invalid_choice(workspace):
    assert _simulate(workspace, _extract(workspace), workspace / "x", "--mode", "fancy") == 2


def test_internal_error_exit_code(workspace, mocker):
    mocker.patch(
        "sascsim.cli.commands.simulate_corpus", side_effect=InternalInvariantError("broken")
    )
    assert _simulate(workspace, _extract(workspace), workspace / "x") == 3


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli(["--version"])
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_unexpected_error_exit_code(workspace, mocker):
    mocker.patch("sascsim.cli.commands.simulate_corpus", side_effect=RuntimeError("boom"))
    assert _simulate(workspace, _extract(workspace), workspace / "x") == 3


def test_evaluate_without_out_writes_run_record(tmp_path, monkeypatch, capsys):
    reference = tmp_path / "ref.tsv"
    reference.write_text("u1\thello world\nu2\tgood morning\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    capsys.readouterr()
    assert run_cli(["evaluate", "--ref", str(reference), "--hyp", str(reference)]) == 0
    record = json.loads((tmp_path / "run.json").read_text(encoding="utf-8"))
    assert record["command"] == "evaluate"
    assert record["params"]["out"] is None
    assert json.loads(capsys.readouterr().out)["systems"][0]["wer"] == 0.0
