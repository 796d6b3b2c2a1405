import io
import json
import subprocess
import sys

import pytest

from coregf import cli
from coregf import graphs as G
from coregf import series as S


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    parser = cli.build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        return exc.code, "", ""
    try:
        cfg = cli.config_from_args(ns)
    except cli.UsageError:
        return 1, "", ""
    code = cli.run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_maps_count_three_maps():
    code, out, _ = run("maps", "count", "--min-degree", "3", "--order", "5")
    assert code == 0
    assert out.rstrip().endswith("47, 278")


def test_maps_count_series_output_round_trips():
    code, out, _ = run("maps", "count", "--order", "6", "--format", "series")
    assert code == 0
    assert [int(c) for c in S.loads(out).coefficient_list()] == [0, 2, 9, 54, 378, 2916, 24057]


def test_graphs_count_all_class():
    code, out, _ = run("graphs", "count", "--min-degree", "2", "--class", "all", "--order", "5")
    assert code == 0
    assert out.rstrip().endswith("1, 10, 253")


def test_graphs_count_planar_class():
    code, out, _ = run("graphs", "count", "--min-degree", "2", "--class", "planar-oracle", "--order", "5")
    assert out.rstrip().endswith("1, 10, 252")


def test_graphs_user_class(tmp_path):
    C = G.all_connected_series(5)
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"C": S.to_document(C.C), "rooted": S.to_document(C.rooted)}))
    code, out, _ = run("graphs", "count", "--min-degree", "3", "--class", "user", "--series", str(f), "--format",
                       "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[-1] == ["5", "26"]


def test_malformed_series_file(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{"format": "exact-series/1", "variables": ["x"]}')
    code, _, err = run("graphs", "count", "--class", "user", "--series", str(f))
    assert code == 1 and "series" in err


def test_core_histogram_csv():
    code, out, _ = run("graphs", "core-histogram", "--n", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["core_size,count", "0,16", "3,12", "4,10"]


def test_constants_report():
    code, out, _ = run("constants", "report")
    assert code == 0
    line = next(l for l in out.splitlines() if l.strip().startswith("gamma2"))
    assert "26.2076" in line
    code, out, _ = run("constants", "report", "--format", "json")
    doc = json.loads(out)
    assert doc["planar"]["unexpected_flags"] == []


def test_degree_dist_and_core_stats():
    code, out, _ = run("maps", "degree-dist", "--family", "3-maps", "--order", "8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [r[1] for r in doc["rows"][:3]] == ["0", "0", "0"]
    code, out, _ = run("maps", "core-stats", "--n", "50")
    assert code == 0 and "sqrt(6)/3" in out


def test_oracle_sweep():
    code, out, _ = run("oracle", "sweep", "--n", "4", "--min-degree", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1:] == ["4,3", "5,6", "6,1"]


def test_usage_errors():
    assert run("nonsense")[0] == 1
    assert run("maps", "count", "--order", "0")[0] == 1
    assert run("maps", "count", "--min-degree", "4")[0] == 1
    assert run("oracle", "sweep", "--n", "20")[0] == 1
    assert run("mc", "largest-tree")[0] == 1
    assert run("selfcheck", "--threads", "0")[0] == 1
    assert run("maps", "count", "--format", "series", "--order", "3")[0] == 0
    assert run("maps", "core-stats", "--format", "series")[0] == 1


def test_mc_commands_are_deterministic():
    a = run("mc", "largest-tree", "--m", "100000", "--reps", "100", "--seed", "7", "--format", "csv")
    b = run("mc", "largest-tree", "--m", "100000", "--reps", "100", "--seed", "7", "--format", "csv",
            "--threads", "2")
    assert a[0] == 0 and a == b
    assert a[1].startswith("x,k,empirical,reference,exact,stderr")
    code, out, _ = run("mc", "poisson", "--base", "graphs", "--m", "100000", "--reps", "200", "--seed", "1",
                       "--format", "json")
    assert code == 0 and json.loads(out)["data"]


def test_selfcheck_passes_and_is_thread_independent():
    a = run("selfcheck")
    b = run("selfcheck", "--threads", "3")
    assert a[0] == 0
    assert a == b


def test_selfcheck_detects_corrupted_constants(tmp_path):
    from coregf import asymptotics as A

    doc = A.load_pinned()
    doc["values"]["gamma"]["value"] = "26.1000"
    f = tmp_path / "pinned.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run("selfcheck", "--pinned", str(f))
    assert code == 2
    assert "FAIL" in out and "planar-constants" in out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "coregf", "maps", "count", "--min-degree", "2", "--order", "5"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert p.stdout.rstrip().endswith("1, 3, 16, 96, 624")
