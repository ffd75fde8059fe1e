import json
import math

import numpy as np
import pytest

import stabground as sg


def test_enumeration_counts():
    assert [len(sg.enumerate_generator_sets(n)) for n in (1, 2, 3)] == [6, 60, 1080]
    assert sg.stabilizer_state_count(4) == 36720
    assert sg.degeneracy_count(20, 0) > 2**64


def test_pauli_algebra():
    assert sg.commutes("XX", "ZZ")
    assert not sg.commutes("XI", "ZI")
    assert sg.multiply("X", "Z") == (3, "Y")
    assert sg.multiply("ZZ", "XX") == (2, "YY")


def test_group_energy_matches_dense_expectation():
    h = sg.Hamiltonian("0.5 XX\n-1.0 ZZ\n0.25 YI\n")
    hm = h.matrix()
    for gens in sg.enumerate_generator_sets(2):
        psi = sg.prepare_state(gens)
        assert sg.group_energy(gens, h) == pytest.approx(np.vdot(psi, hm @ psi).real, abs=1e-12)


def test_tfim_osgs():
    r = sg.solve_osgs(sg.tfim(5, 0.6))
    assert r["e_min"] == -4.0
    assert r["generators"] == ["-ZZIII", "-IZZII", "-IIZZI", "-IIIZZ", "-XXXXX"]
    assert r["fidelity"] == pytest.approx(0.7076, abs=1e-4)
    assert sg.solve_osgs(sg.tfim(5, 0.9))["e_min"] == -4.5


def test_mite_floor_small():
    h = sg.tfim(5, 0.6)
    psi = sg.prepare_state(sg.solve_osgs(h)["generators"])
    r = sg.run_mite(h, psi, trials=50, steps=300, seed=7)
    assert r["mean_fidelity"][0] == pytest.approx(0.70763, abs=1e-5)
    assert r["min_fidelity"] >= 0.70
    assert r["mean_fidelity"][-1] > 0.99


def test_analysis_and_errors():
    kp = sg.analysis.k_prime(-3, -2.9, -2.95, 0.1, 0.7, 0.2)
    assert kp > 1
    assert sg.analysis.k_prime_exact_limit(0.1, -3) == pytest.approx(1 / math.tan(-0.3 + math.pi / 4) ** 2)
    with pytest.raises(sg.Error):
        sg.analysis.k_min(1, 0, 0, 0.1, 0.7, 0.2)
    with pytest.raises(sg.ParseError):
        sg.Hamiltonian("1.0 ZQ\n")
    with pytest.raises(sg.CapacityError):
        sg.enumerate_generator_sets(7)


def test_cli_entry():
    code, out, _ = sg.cli(["--json", "osgs", "--tfim", "3,0.4"])
    assert code == 0
    assert json.loads(out)["e_min"] == -2.0
