"""Run manifests and the results directory."""

import numpy as np

from xhdg_bench.core.storage import (
    FIELDS_DIR,
    MANIFEST_DIR,
    generate_run_id,
    initialize_storage,
    list_manifests,
    load_manifest,
    save_manifest,
)


def test_initialize_storage(tmp_path):
    results = initialize_storage(tmp_path / "results")
    assert (results / MANIFEST_DIR).is_dir()
    assert (results / FIELDS_DIR).is_dir()


def test_manifest_round_trip(tmp_path):
    run_id = generate_run_id()
    save_manifest(
        run_id,
        "converge",
        {"case": "peanut", "flux": "upwind"},
        "ok",
        ["table.csv"],
        1.5,
        metadata={"pivot_ratio": np.float64(1e-4), "counts": np.array([1, 2])},
        output_dir=tmp_path,
    )
    manifest = load_manifest(run_id, tmp_path)
    assert manifest["status"] == "ok"
    assert manifest["metadata"]["counts"] == [1, 2]
    assert manifest["metadata"]["pivot_ratio"] == 1e-4

    runs = list_manifests(tmp_path)
    assert len(runs) == 1
    assert runs[0]["case"] == "peanut"
    assert runs[0]["flux"] == "upwind"


def test_unknown_run(tmp_path):
    assert load_manifest("missing", tmp_path) is None
    assert list_manifests(tmp_path / "nowhere") == []


def test_unreadable_manifest_is_skipped(tmp_path):
    initialize_storage(tmp_path)
    (tmp_path / MANIFEST_DIR / "run_broken.json").write_text("{")
    save_manifest(generate_run_id(), "solve", {}, "ok", [], 0.1, output_dir=tmp_path)
    assert len(list_manifests(tmp_path)) == 1
