import io
import json
import os

import pytest

from latrot.cli import main, parse_args, UsageError


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def strip_timing(text, fmt):
    if fmt == "json":
        data = json.loads(text)
        data.pop("meta", None)
        return json.dumps(data)
    lines = text.splitlines()
    if lines and lines[0].endswith(",elapsed_ms"):
        return "\n".join(",".join(line.split(",")[:-1]) for line in lines)
    return text


def test_census_json_cardinal_zero():
    code, out, err = run_cli(
        "census", "--angle", "pi/2", "--M", "10", "--kind", "holes",
        "--format", "json",
    )
    assert code == 0 and err == ""
    data = json.loads(out)
    assert data["count"] == 0
    assert data["angle"] == "pi/2"
    assert "elapsed_ms" in data["meta"]


def test_census_csv_header():
    import csv as csvmod

    code, out, _ = run_cli("census", "--angle", "pyth:3,4,5", "--M", "8",
                           "--kind", "collisions")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "angle,mode,kind,M,count,method,elapsed_ms"
    fields = next(csvmod.reader([lines[1]]))
    assert fields[:4] == ["pyth:3,4,5", "floor", "collisions", "8"]


def test_pyth_csv_rows():
    code, out, _ = run_cli("pyth", "--qmax", "13")
    assert code == 0
    assert out.splitlines() == ["q,u,v,p1,p2,h", "5,2,1,3,4,2", "13,3,2,5,12,8"]


def test_orbit_json_period8():
    code, out, _ = run_cli("orbit", "--angle", "pi/4", "--start", "9,0",
                           "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["period"] == 8 and data["preperiod"] == 0
    assert data["start"] == [9, 0]


def test_orbit_csv_dump():
    code, out, _ = run_cli("orbit", "--angle", "pi/4", "--start", "9,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "step,x,y"
    assert lines[1] == "0,9,0"
    assert lines[-1] == "8,9,0"


def test_usage_errors_exit_2():
    for argv in (
        ["census", "--angle", "pyth:3,4,6", "--M", "5", "--kind", "holes"],
        ["census", "--angle", "pi/4", "--M", "-3", "--kind", "holes"],
        ["census", "--angle", "pi/4", "--kind", "holes"],
        ["growth", "--angle", "pi/4", "--Ms", "16,8", "--kind", "holes"],
        ["udist", "--angle", "pi/4", "--t1", "0", "--t2", "1/2", "--M", "5"],
        ["orbit", "--angle", "pi/4", "--start", "nine,zero"],
        ["pyth", "--qmax", "3"],
        ["nonsense"],
    ):
        code, out, err = run_cli(*argv)
        assert code == 2, argv
        assert "usage error" in err


def test_computational_errors_exit_1():
    code, out, err = run_cli("growth", "--angle", "pi/2", "--Ms", "16,32,64",
                             "--kind", "holes")
    assert code == 1
    assert "DegenerateCounts" in err
    code, _, err = run_cli("census", "--angle", "pi/4", "--M", "600",
                           "--kind", "holes", "--oracle")
    assert code == 1 and "CapExceeded" in err


def test_oracle_flag_forces_brute_force():
    code, out, _ = run_cli("census", "--angle", "pi/4", "--M", "8",
                           "--kind", "collisions", "--oracle", "--format", "json")
    assert code == 0
    assert json.loads(out)["method"] == "brute_force"


def test_deterministic_output():
    argv = ["census", "--angle", "pyth:3,4,5", "--M", "12", "--kind", "holes",
            "--format", "json", "--emit-points"]
    _, out1, _ = run_cli(*argv)
    _, out2, _ = run_cli(*argv)
    assert strip_timing(out1, "json") == strip_timing(out2, "json")
    argv_csv = ["sweep", "--angle", "pi/4", "--M", "4"]
    _, o1, _ = run_cli(*argv_csv)
    _, o2, _ = run_cli(*argv_csv)
    assert o1 == o2


def test_threads_flag_keeps_output():
    base = ["census", "--angle", "pi/4", "--M", "20", "--kind", "collisions",
            "--format", "json", "--emit-points"]
    _, a, _ = run_cli(*base, "--threads", "1")
    _, b, _ = run_cli(*base, "--threads", "3")
    assert strip_timing(a, "json") == strip_timing(b, "json")


def test_emit_points_and_points_file(tmp_path):
    target = tmp_path / "pts.csv"
    code, out, _ = run_cli("census", "--angle", "pi/4", "--M", "4",
                           "--kind", "holes", "--points-file", str(target))
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) > 1
    # csv + emit-points without a file is a usage error
    code, _, err = run_cli("census", "--angle", "pi/4", "--M", "4",
                           "--kind", "holes", "--emit-points")
    assert code == 2
    # json embeds points
    code, out, _ = run_cli("census", "--angle", "pi/4", "--M", "4",
                           "--kind", "holes", "--format", "json", "--emit-points")
    data = json.loads(out)
    assert data["count"] == len(data["points"])
    ys = [p[1] for p in data["points"]]
    assert ys == sorted(ys)


def test_classify_csv():
    code, out, _ = run_cli("classify", "--angle", "pi/4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "angle,sin,cos,class"
    assert lines[1].startswith("pi/4,sqrt(2)/2,sqrt(2)/2,linear_relation")
    assert "exceptional=True" in lines[1]


def test_sweep_json_histogram_sorted():
    code, out, _ = run_cli("sweep", "--angle", "pi/2", "--M", "2",
                           "--format", "json")
    data = json.loads(out)
    assert data["histogram"] == [[1, 1], [4, 24]]
    assert data["undetermined"] == 0 and data["escaped"] == 0


def test_period8_cli():
    code, out, _ = run_cli("period8", "--amax", "200", "--format", "json")
    data = json.loads(out)
    assert data["violators"] == [] and data["boundary"] == [1]
    code, out, _ = run_cli("period8", "--amax", "200", "--strict-boundary",
                           "--format", "json")
    data = json.loads(out)
    assert [v["a"] for v in data["violators"]] == [1]


def test_growth_cli_csv():
    import csv as csvmod

    code, out, _ = run_cli("growth", "--angle", "pyth:3,4,5",
                           "--Ms", "16,32,64", "--kind", "holes")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "angle,mode,kind,Ms,counts,exponent,r_squared"
    fields = next(csvmod.reader([lines[1]]))
    assert fields[3] == "16;32;64"
    assert 1.5 <= float(fields[5]) <= 2.3


def test_udist_cli_residue():
    base = ["udist", "--angle", "pyth:3,4,5", "--t1", "1/2", "--t2", "1/2",
            "--M", "30", "--format", "json"]
    _, direct, _ = run_cli(*base)
    _, residue, _ = run_cli(*base, "--residue")
    assert json.loads(direct)["count"] == json.loads(residue)["count"]


def test_config_file(tmp_path):
    cfg = tmp_path / "latrot.cfg"
    cfg.write_text("format=json\nthreads=2\n# comment\noracle_cap=700\n")
    code, out, _ = run_cli("census", "--angle", "pi/2", "--M", "4",
                           "--kind", "holes", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["count"] == 0  # json format came from the config
    # flag overrides config
    code, out, _ = run_cli("census", "--angle", "pi/2", "--M", "4",
                           "--kind", "holes", "--config", str(cfg),
                           "--format", "csv")
    assert out.startswith("angle,")
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense=1\n")
    code, _, err = run_cli("census", "--angle", "pi/2", "--M", "4",
                           "--kind", "holes", "--config", str(bad))
    assert code == 2


def test_env_var_precision(monkeypatch):
    monkeypatch.setenv("LATTICE_ROT_PRECISION_BITS", "192")
    code, out, _ = run_cli("classify", "--angle", "rad:~1.0", "--format", "json")
    assert code == 0
    assert json.loads(out)["angle"].endswith("@192")


def test_parse_args_surface():
    ns = parse_args(["census", "--angle", "pi/4", "--M", "16",
                     "--kind", "holes", "--format", "json"])
    assert ns.command == "census" and ns.M == 16
    with pytest.raises(UsageError):
        parse_args(["census", "--angle", "pi/4", "--M", "16"])
