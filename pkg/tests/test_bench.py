import json

import numpy as np

from motionweave.bench import (
    BenchmarkCase,
    RunConfig,
    load_manifest,
    report_to_csv,
    report_to_json,
    run_benchmark,
    score_passthrough,
    validate_case,
)
from motionweave.checkpoint import load_checkpoint


class TestManifest:
    def test_round_trip(self, blob_benchmark):
        cases = load_manifest(blob_benchmark)
        assert len(cases) == 4
        assert cases[0].case_id == "case000"
        assert cases[0].category == "single-blob"

    def test_validate_clean_case(self, blob_benchmark, geom):
        cases = load_manifest(blob_benchmark)
        assert validate_case(cases[0], blob_benchmark.parent, geom) == []

    def test_validate_missing_file(self, blob_benchmark, geom):
        case = BenchmarkCase(
            case_id="x",
            category="",
            first_frame="nope.png",
            video="nope.wmt1",
            trajectories="nope.json",
        )
        problems = validate_case(case, blob_benchmark.parent, geom)
        assert len(problems) == 3


class TestRunner:
    def test_passthrough_scores_perfectly(self, blob_benchmark, geom):
        cases = load_manifest(blob_benchmark)
        row = score_passthrough(cases[0], blob_benchmark.parent, geom)
        assert row["epe"] == 0.0
        assert row["ssim"] == 1.0
        assert row["psnr"] == float("inf")

    def test_empty_manifest(self, micro_checkpoint, blob_benchmark):
        model = load_checkpoint(micro_checkpoint)
        report = run_benchmark([], model, blob_benchmark.parent, RunConfig(seed=0))
        assert report["cases"] == []
        assert report["aggregate"]["epe"] is None

    def test_report_rows_and_aggregates(self, micro_checkpoint, blob_benchmark):
        model = load_checkpoint(micro_checkpoint)
        cases = load_manifest(blob_benchmark)
        report = run_benchmark(cases, model, blob_benchmark.parent, RunConfig(seed=1))
        assert len(report["cases"]) == 4
        for metric in ("epe", "psnr", "ssim"):
            vals = [r[metric] for r in report["cases"]]
            assert np.isclose(report["aggregate"][metric], np.mean(vals))
        assert report["metadata"]["seed"] == 1
        assert "fid" not in report["aggregate"] and "fvd" not in report["aggregate"]

    def test_per_case_failure_recorded_run_continues(
        self, micro_checkpoint, blob_benchmark
    ):
        model = load_checkpoint(micro_checkpoint)
        cases = load_manifest(blob_benchmark)
        broken = BenchmarkCase(
            case_id="broken",
            category="",
            first_frame="missing.png",
            video="missing.wmt1",
            trajectories="missing.json",
        )
        report = run_benchmark(
            [cases[0], broken, cases[1]], model, blob_benchmark.parent, RunConfig(seed=0)
        )
        assert "error" in report["cases"][1]
        assert "error" not in report["cases"][0]
        assert "error" not in report["cases"][2]

    def test_deterministic_bytes(self, micro_checkpoint, blob_benchmark):
        model = load_checkpoint(micro_checkpoint)
        cases = load_manifest(blob_benchmark)
        run = RunConfig(seed=3, checkpoint_id="abc")
        a = report_to_json(run_benchmark(cases, model, blob_benchmark.parent, run))
        b = report_to_json(run_benchmark(cases, model, blob_benchmark.parent, run))
        assert a == b

    def test_external_predicted_tracks_pass_through(self, micro_checkpoint, blob_benchmark):
        # supplying the ground-truth tracks as predictions forces EPE 0
        model = load_checkpoint(micro_checkpoint)
        case = load_manifest(blob_benchmark)[0]
        case.predicted_tracks = case.trajectories
        report = run_benchmark([case], model, blob_benchmark.parent, RunConfig(seed=0))
        assert report["cases"][0]["epe"] == 0.0

    def test_csv_summary(self, micro_checkpoint, blob_benchmark):
        model = load_checkpoint(micro_checkpoint)
        cases = load_manifest(blob_benchmark)[:2]
        report = run_benchmark(cases, model, blob_benchmark.parent, RunConfig(seed=0))
        csv = report_to_csv(report)
        lines = csv.strip().split("\n")
        assert lines[0].startswith("case_id,")
        assert len(lines) == 3

    def test_report_json_parses_back(self, micro_checkpoint, blob_benchmark):
        model = load_checkpoint(micro_checkpoint)
        cases = load_manifest(blob_benchmark)[:1]
        text = report_to_json(run_benchmark(cases, model, blob_benchmark.parent, RunConfig()))
        doc = json.loads(text)
        assert doc["metadata"]["case_count"] == 1
