import json
import os

import pytest

import bondscope

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def test_crystal_table_rows():
    quartz = bondscope.generate_crystal("quartz", 4)
    assert quartz.atom_count == 4 ** 3 * 9
    assert bondscope.shell_count(quartz, 0, 6) == [1, 4, 4, 12, 12, 36, 30]
    assert sorted(bondscope.h1_barcode(quartz, 0, 6)) == [(0, 6)] * 3 + [(2, 6)] * 3
    assert bondscope.primitive_rings(quartz, 0, 6) == [12] * 6
    dist = bondscope.classify(quartz, "h1-barcode", 6, root_species="Si")
    assert dist.total == 192
    assert dist.classes() == [("3×(0,6),3×(2,6)", 192)]


def test_endpoints_from_shell_count():
    assert bondscope.endpoints_from_shell_count([1, 4, 4, 12, 12, 36, 25])[-1] == 11


def test_statistics_and_json_round_trip():
    crystal = bondscope.generate_crystal("cristobalite", 3)
    switched = bondscope.bond_switch(crystal, 100, 7)
    a = bondscope.classify(crystal, "coordination", 4, root_species="Si")
    b = bondscope.classify(switched, "coordination", 4, root_species="Si", threads=3)
    assert bondscope.scaled_entropy(a) == 0.0
    assert 0.0 < bondscope.scaled_entropy(b) <= 1.0
    assert bondscope.symmetrized_kl(a, b) > 0.0
    assert bondscope.symmetrized_kl(b, b) == 0.0
    text = b.to_json()
    assert json.loads(text)["total"] == 216
    assert bondscope.Distribution.from_json(text) == b


def test_uncertainty_coefficient_is_one_on_a_function():
    net = bondscope.load(os.path.join(DATA, "disordered.json"))[0]
    u = bondscope.uncertainty_coefficient(net, "coordination", "coordination", 3, 3)
    assert u == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        bondscope.classify(bondscope.generate_crystal("quartz", 3), "nope", 2)
    with pytest.raises(bondscope.MappingError):
        bondscope.load(os.path.join(DATA, "small.dump"), species_map="1=Si")
    with pytest.raises(ValueError):
        bondscope.BondNetwork(["A", "B"], [(0, 0)])
