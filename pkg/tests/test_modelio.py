import numpy as np
import pytest

from akem.errors import CorruptModel, VersionMismatch
from akem.features import FeatureVector
from akem.modelio import FORMAT_VERSION, dumps, load_model, loads, save_model
from akem.scoring import MartParams, ModelBundle, TrainingExample, mart_predict, mart_train, svr_predict, svr_train


@pytest.fixture(scope="module")
def bundle():
    rng = np.random.default_rng(11)
    X = rng.uniform(-1, 1, (80, 9))
    y = (X[:, 0] + X[:, 7] > 0).astype(float)
    data = [TrainingExample(FeatureVector(*x), t, "q", "e") for x, t in zip(X, y)]
    return ModelBundle(svr_train(data), mart_train(data, MartParams(n_trees=20)))


@pytest.fixture(scope="module")
def probe():
    return np.random.default_rng(5).uniform(-2, 2, (100, 9))


def test_svr_round_trip(bundle, probe, tmp_path):
    save_model(tmp_path / "svr.bin", bundle.svr)
    loaded = load_model(tmp_path / "svr.bin")
    assert np.array_equal(svr_predict(loaded, probe), svr_predict(bundle.svr, probe))
    assert loaded.params == bundle.svr.params


def test_mart_round_trip(bundle, probe, tmp_path):
    save_model(tmp_path / "mart.bin", bundle.mart)
    loaded = load_model(tmp_path / "mart.bin")
    assert np.array_equal(mart_predict(loaded, probe), mart_predict(bundle.mart, probe))
    assert loaded.params == bundle.mart.params


def test_bundle_round_trip(bundle, probe):
    loaded = loads(dumps(bundle))
    assert isinstance(loaded, ModelBundle)
    assert np.array_equal(loaded.score(probe), bundle.score(probe))
    assert dumps(loaded) == dumps(bundle)


@pytest.mark.parametrize("cut", [1, 10, 30, -1, -5])
def test_truncated(bundle, cut):
    data = dumps(bundle)
    with pytest.raises(CorruptModel):
        loads(data[:cut])


def test_bit_flip(bundle):
    data = bytearray(dumps(bundle))
    data[len(data) // 2] ^= 0x40
    with pytest.raises(CorruptModel):
        loads(bytes(data))


def test_bad_magic(bundle):
    with pytest.raises(CorruptModel):
        loads(b"NOTAMODL" + dumps(bundle)[8:])


def test_version_mismatch(bundle):
    data = bytearray(dumps(bundle))
    data[8:10] = (FORMAT_VERSION + 1).to_bytes(2, "little")
    with pytest.raises(VersionMismatch):
        loads(bytes(data))


def test_unknown_type():
    with pytest.raises(TypeError):
        dumps(object())
