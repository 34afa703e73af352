import math

import numpy as np
import pytest

from aural.errors import BadInput, UnknownWavelet
from aural.wavelets import (FilterBank, filter_identity_errors, list_bank,
                            load_filter_bank, parse_registry)

EXPECTED_FAMILIES = {
    "db": [f"db{i}" for i in range(1, 39)],
    "sym": [f"sym{i}" for i in range(2, 21)],
    "coif": [f"coif{i}" for i in range(1, 6)],
    "bior": ["bior1.1", "bior1.3", "bior1.5", "bior2.2", "bior2.4",
             "bior2.6", "bior2.8", "bior3.1", "bior3.3", "bior3.5",
             "bior3.7", "bior3.9", "bior4.4", "bior5.5", "bior6.8"],
    "rbio": ["rbio1.1", "rbio1.3", "rbio1.5", "rbio2.2", "rbio2.4",
             "rbio2.6", "rbio2.8", "rbio3.1", "rbio3.3", "rbio3.5",
             "rbio3.7", "rbio3.9", "rbio4.4", "rbio5.5", "rbio6.8"],
}


def test_registry_size_is_92():
    assert len(list_bank()) == 92


def test_registry_contents():
    names = set(list_bank())
    for family, members in EXPECTED_FAMILIES.items():
        for m in members:
            assert m in names, m
    assert sum(len(v) for v in EXPECTED_FAMILIES.values()) == 92


def test_ordering_family_then_order():
    names = list_bank()
    assert names.index("db2") < names.index("db10")
    assert names.index("bior1.3") < names.index("bior3.1")
    assert names.index("bior6.8") < names.index("coif1")
    assert names.index("coif5") < names.index("db1")
    assert names.index("rbio6.8") < names.index("sym2")


def test_ordering_stable_across_calls():
    assert list_bank() == list_bank()


def test_haar_is_analytic():
    fb = load_filter_bank("db1")
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    assert fb.dec_lo == pytest.approx([inv_sqrt2, inv_sqrt2], abs=1e-15)
    assert fb.orthogonal


def test_bior31_present_and_valid():
    fb = load_filter_bank("bior3.1")
    assert not fb.orthogonal
    assert fb.filter_length >= 4
    assert np.isfinite(fb.dec_lo).all()


def test_db37_present():
    fb = load_filter_bank("db37")
    assert fb.filter_length == 74


def test_morlet_rejected():
    with pytest.raises(UnknownWavelet):
        load_filter_bank("morl")


def test_unknown_name_rejected():
    with pytest.raises(UnknownWavelet):
        load_filter_bank("not-a-wavelet")


@pytest.mark.parametrize("name", [n for n in
                                  (EXPECTED_FAMILIES["db"] +
                                   EXPECTED_FAMILIES["sym"] +
                                   EXPECTED_FAMILIES["coif"])])
def test_orthogonal_identities(name):
    fb = load_filter_bank(name)
    assert fb.orthogonal
    errs = filter_identity_errors(fb)
    assert errs["sum"] < 1e-8, errs
    assert errs["energy"] < 1e-8, errs
    assert errs["double_shift"] < 1e-8, errs


def test_all_filters_even_common_length():
    for name in list_bank():
        fb = load_filter_bank(name)
        assert fb.filter_length % 2 == 0
        assert fb.dec_hi.size == fb.rec_lo.size == fb.rec_hi.size == fb.filter_length


def test_registry_rejects_unknown_version():
    with pytest.raises(BadInput):
        parse_registry('{"version": 99, "wavelets": {}}')
    with pytest.raises(BadInput):
        parse_registry("not json")
