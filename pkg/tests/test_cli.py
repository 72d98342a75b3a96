import json

import pytest

from dfqre.cli import main
from dfqre.ingest import SyntheticSpec, gen_synthetic, serialize_integrals

WATER_XYZ = "3\nwater\nO 0.0 0.0 0.0\nH 0.9572 0.0 0.0\nH -0.2399872 0.9266272 0.0\n"


@pytest.fixture
def integral_file(tmp_path):
    ints = gen_synthetic(SyntheticSpec(n_orb=3, rank=4, seed=2))
    path = tmp_path / "mol.ints"
    path.write_text(serialize_integrals(ints))
    return path


def test_parse_xyz_round_trip(tmp_path, capsys):
    path = tmp_path / "w.xyz"
    path.write_text(WATER_XYZ)
    assert main(["parse-xyz", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "3"
    assert "O 0.0 0.0 0.0" in out


def test_parse_xyz_json(tmp_path, capsys):
    path = tmp_path / "w.xyz"
    path.write_text(WATER_XYZ)
    assert main(["parse-xyz", str(path), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["label"] == "water"
    assert len(data["atoms"]) == 3


def test_parse_error_reports_category(tmp_path, capsys):
    path = tmp_path / "bad.xyz"
    path.write_text("Zz 0 0 0\n")
    assert main(["parse-xyz", str(path)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "parse"


def test_full_estimation_chain(tmp_path, integral_file, capsys):
    df_path = tmp_path / "df.json"
    assert main(["factorize", str(integral_file), "--eps", "1e-3",
                 "-o", str(df_path)]) == 0
    capsys.readouterr()

    logical_path = tmp_path / "logical.json"
    assert main(["estimate-logical", str(df_path), "--eps", "1e-3",
                 "-o", str(logical_path)]) == 0
    logical = json.loads(logical_path.read_text())
    assert logical["t_count"] > 0
    capsys.readouterr()

    assert main(["estimate-physical", "--from-logical", str(logical_path),
                 "--preset", "qubit_gate_ns_e4"]) == 0
    physical = json.loads(capsys.readouterr().out)
    assert physical["n_physical_qubits"] == \
        physical["tiles"] * 2 * physical["distance"] ** 2 \
        + physical["factory_qubits_total"]


def test_estimate_physical_direct_args(capsys):
    assert main(["estimate-physical", "--qubits", "661",
                 "--tcount", "4.00e10"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["distance"] == 15
    assert data["n_factories"] == 15


def test_estimate_physical_requires_inputs(capsys):
    assert main(["estimate-physical"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "invalid-input"


def test_reproduce_table_default_fixture(capsys, tmp_path):
    out_csv = tmp_path / "cmp.csv"
    assert main(["reproduce-table", "--csv", str(out_csv)]) == 0
    out = capsys.readouterr().out
    summary = json.loads(out.strip().splitlines()[-1])
    assert summary["rows"] == 47
    assert summary["distance_exact"] >= 45
    assert out_csv.exists()


def test_fit_scaling_cli(tmp_path, capsys):
    path = tmp_path / "points.csv"
    path.write_text("n_orb,t_count\n10,1e5\n100,1e10\n")
    assert main(["fit-scaling", str(path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["exponent"] == pytest.approx(5.0, abs=1e-9)


def test_fmo_assemble_cli(tmp_path, capsys):
    ledger = {"monomers": {"A": -1.0, "B": -2.0},
              "dimers": [{"pair": ["A", "B"], "energy": -3.5}]}
    path = tmp_path / "ledger.json"
    path.write_text(json.dumps(ledger))
    assert main(["fmo-assemble", str(path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["total_energy_hartree"] == pytest.approx(-3.5, abs=1e-12)


def test_binding_affinity_cli(capsys):
    assert main(["binding-affinity", "-10.5", "-9", "-1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["delta_e_hartree"] == pytest.approx(-0.5)
    assert data["delta_e_kj_per_mol"] == pytest.approx(-1312.7498)


def test_config_file_and_env(tmp_path, capsys, monkeypatch, integral_file):
    config = {"estimation": {"eps_total_energy": 2e-3}}
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))

    df_path = tmp_path / "df.json"
    main(["factorize", str(integral_file), "-o", str(df_path)])
    capsys.readouterr()

    assert main(["--config", str(config_path),
                 "estimate-logical", str(df_path)]) == 0
    loose = json.loads(capsys.readouterr().out)

    monkeypatch.setenv("DFQRE_CONFIG", str(config_path))
    assert main(["estimate-logical", str(df_path)]) == 0
    via_env = json.loads(capsys.readouterr().out)
    assert via_env["t_count"] == loose["t_count"]

    monkeypatch.delenv("DFQRE_CONFIG")
    assert main(["estimate-logical", str(df_path)]) == 0
    default = json.loads(capsys.readouterr().out)
    assert default["t_count"] > loose["t_count"]  # tighter default accuracy


def test_missing_file_io_error(capsys):
    assert main(["parse-xyz", "/nonexistent/file.xyz"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "io"


def test_custom_qubit_preset_from_config(tmp_path, capsys):
    # slower, noisier hardware defined entirely in the config file
    config = {"qubit_presets": {"slow": {
        "t_gate": 1e-7, "t_meas": 2e-7, "p_gate": 5e-4, "p_meas": 5e-4}}}
    config_path = tmp_path / "cfg.json"
    config_path.write_text(json.dumps(config))
    assert main(["--config", str(config_path), "estimate-physical",
                 "--qubits", "661", "--tcount", "4.00e10",
                 "--preset", "slow"]) == 0
    custom = json.loads(capsys.readouterr().out)
    assert main(["estimate-physical", "--qubits", "661",
                 "--tcount", "4.00e10"]) == 0
    default = json.loads(capsys.readouterr().out)
    assert custom["distance"] > default["distance"]
    assert custom["runtime_s"] > default["runtime_s"]


def test_unknown_preset_reports_category(capsys):
    assert main(["estimate-physical", "--qubits", "10", "--tcount", "100",
                 "--preset", "nope"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "invalid-input"


def test_reproduce_table_explicit_fixture(tmp_path, capsys):
    from importlib import resources
    bundled = resources.files("dfqre.data").joinpath(
        "ab16_resource_table.csv").read_text()
    fixture = tmp_path / "table.csv"
    fixture.write_text(bundled)
    assert main(["reproduce-table", str(fixture)]) == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["rows"] == 47


def test_estimate_physical_budget_knob(capsys):
    # a 3x looser budget relaxes the selected code distance
    assert main(["estimate-physical", "--qubits", "1290",
                 "--tcount", "6.20e11"]) == 0
    tight = json.loads(capsys.readouterr().out)
    assert main(["estimate-physical", "--qubits", "1290",
                 "--tcount", "6.20e11", "--budget", "0.03"]) == 0
    loose = json.loads(capsys.readouterr().out)
    assert tight["distance"] == 17
    assert loose["distance"] == 15


def test_repeated_runs_byte_identical(tmp_path, capsys, integral_file):
    outputs = []
    for _ in range(2):
        assert main(["reproduce-table"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]

    df_texts = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["factorize", str(integral_file), "--eps", "1e-3",
                     "-o", str(path)]) == 0
        capsys.readouterr()
        df_texts.append(path.read_text())
    assert df_texts[0] == df_texts[1]
