import json
from pathlib import Path

import pytest

from mulmetric.common import FiniteDomain
from mulmetric.core import Flavor, Interval
from mulmetric.manifest import ManifestError, load_system_manifest, parse_numeric_map

DATA = Path(__file__).parent / "data"


def write_manifest(tmp_path, doc, name="system.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


BASE_FINITE = {
    "domain": {"kind": "finite", "labels": ["u", "v", "w"]},
    "maps": {"A": [0, 1, 2], "B": [0, 1, 2], "S": [0, 0, 0], "T": [0, 0, 0]},
    "metric": {"file": str(DATA / "line3.csv"), "flavor": "metric"},
}


def test_load_finite_system():
    sysm = load_system_manifest(DATA / "finite_system.json")
    assert isinstance(sysm.domain, FiniteDomain)
    assert sysm.domain.labels == ("u", "v", "w")
    assert sysm.S == (0, 0, 0)
    assert sysm.metric.flavor is Flavor.ADDITIVE
    # headerless CSV adopts the manifest labels
    assert sysm.metric.labels == ("u", "v", "w")


def test_load_interval_system():
    sysm = load_system_manifest(DATA / "interval_system.json")
    assert isinstance(sysm.domain, Interval)
    assert sysm.sections and set(sysm.sections) == {"A", "B"}
    assert sysm.apply("S", 1.0) == 0.25


def test_unknown_top_level_field(tmp_path):
    doc = dict(BASE_FINITE, extra=1)
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "extra"


def test_missing_required_field(tmp_path):
    doc = {k: v for k, v in BASE_FINITE.items() if k != "metric"}
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "metric"


def test_bad_domain_kind(tmp_path):
    doc = dict(BASE_FINITE, domain={"kind": "graph"})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "domain.kind"


def test_duplicate_labels(tmp_path):
    doc = dict(BASE_FINITE, domain={"kind": "finite", "labels": ["u", "u", "w"]})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "domain.labels"


def test_map_entry_out_of_range(tmp_path):
    doc = dict(BASE_FINITE, maps={"A": [0, 1, 2], "B": [0, 1, 2], "S": [0, 0, 9], "T": [0, 0, 0]})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "maps.S[2]"


def test_map_set_must_be_exactly_abst(tmp_path):
    doc = dict(BASE_FINITE, maps={"A": [0, 1, 2], "B": [0, 1, 2], "S": [0, 0, 0]})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "maps"


def test_metric_size_mismatch(tmp_path):
    doc = dict(BASE_FINITE, metric={"file": str(DATA / "pair2.csv"), "flavor": "metric"})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "metric.file"


def test_metric_file_resolved_relative_to_manifest(tmp_path):
    (tmp_path / "t.csv").write_text("0,1,2\n1,0,2.5\n2,2.5,0\n")
    doc = dict(BASE_FINITE, metric={"file": "t.csv", "flavor": "metric"})
    sysm = load_system_manifest(write_manifest(tmp_path, doc))
    assert sysm.metric.entries[0][2] == 2.0


def test_labeled_table_must_match_domain(tmp_path):
    (tmp_path / "t.csv").write_text("a,b,c\n0,1,2\n1,0,2.5\n2,2.5,0\n")
    doc = dict(BASE_FINITE, metric={"file": "t.csv", "flavor": "metric"})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "metric.file"


def test_builtin_metric_requires_interval(tmp_path):
    doc = dict(BASE_FINITE, metric={"builtin": "exp-abs"})
    with pytest.raises(ManifestError):
        load_system_manifest(write_manifest(tmp_path, doc))


def test_sections_only_on_intervals(tmp_path):
    doc = dict(BASE_FINITE, sections={"A": "identity"})
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(write_manifest(tmp_path, doc))
    assert exc.value.path == "sections"


def test_continuity_declaration(tmp_path):
    doc = dict(BASE_FINITE, continuity="S")
    sysm = load_system_manifest(write_manifest(tmp_path, doc))
    assert sysm.continuity_declaration == "S"
    doc = dict(BASE_FINITE, continuity="Q")
    with pytest.raises(ManifestError):
        load_system_manifest(write_manifest(tmp_path, doc))


def test_invalid_json_reports_file(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ManifestError) as exc:
        load_system_manifest(p)
    assert exc.value.path == "<file>"


# ------------------------------------------------------------ map specs


def test_parse_numeric_map_specs():
    assert parse_numeric_map("identity")(3.5) == 3.5
    assert parse_numeric_map("affine:2,-1")(3.0) == 5.0
    assert parse_numeric_map("constant:7")(0.0) == 7.0
    assert parse_numeric_map(" affine:0.5,0 ")(4.0) == 2.0


def test_parse_numeric_map_errors():
    for bad in ("affine:1", "affine:a,b", "constant:", "rotate:90", ""):
        with pytest.raises(ManifestError):
            parse_numeric_map(bad)
