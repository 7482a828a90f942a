import numpy as np
import pytest

from cwe_embedder.pooling import LayerMode, LayerSpec, pool


def random_states(rng, n_states=5, n_pieces=6, hidden=8):
    return [rng.normal(size=(n_pieces, hidden)) for _ in range(n_states)]


def naive_pool(hidden_states, piece_idxs, spec):
    """Independent recomputation with explicit loops."""
    n_states = len(hidden_states)
    hidden = len(hidden_states[0][0])
    if spec.mode is LayerMode.SINGLE_LAYER:
        layers = [spec.layer if spec.layer >= 0 else n_states + spec.layer]
    else:
        layers = [n_states - 1, n_states - 2, n_states - 3, n_states - 4]
    means = []
    for li in layers:
        acc = [0.0] * hidden
        for pi in piece_idxs:
            for d in range(hidden):
                acc[d] += float(hidden_states[li][pi][d])
        means.append([v / len(piece_idxs) for v in acc])
    if spec.mode is LayerMode.CONCAT_LAST_4:
        return np.array([v for m in means for v in m])
    if spec.mode is LayerMode.SUM_LAST_4:
        return np.sum(np.array(means), axis=0)
    return np.array(means[0])


class TestPool:
    def test_single_piece_concat_equals_raw(self):
        rng = np.random.default_rng(0)
        states = random_states(rng, n_states=5, n_pieces=3, hidden=1024)
        out = pool(states, {0: [1]}, 0, LayerSpec(LayerMode.CONCAT_LAST_4))
        assert out.shape == (4096,)
        expected = np.concatenate([states[4][1], states[3][1],
                                   states[2][1], states[1][1]])
        assert np.allclose(out, expected, atol=1e-6)

    def test_two_pieces_averaged(self):
        rng = np.random.default_rng(1)
        states = random_states(rng)
        out = pool(states, {0: [2, 4]}, 0, LayerSpec(LayerMode.SINGLE_LAYER,
                                                     layer=-1))
        assert np.allclose(out, (states[-1][2] + states[-1][4]) / 2,
                           atol=1e-6)

    def test_matches_naive_loop_oracle(self):
        rng = np.random.default_rng(2)
        specs = [LayerSpec(LayerMode.CONCAT_LAST_4),
                 LayerSpec(LayerMode.SUM_LAST_4),
                 LayerSpec(LayerMode.SINGLE_LAYER, layer=-1),
                 LayerSpec(LayerMode.SINGLE_LAYER, layer=0)]
        for i in range(100):
            states = random_states(rng, n_states=int(rng.integers(4, 8)),
                                   n_pieces=int(rng.integers(1, 7)),
                                   hidden=int(rng.integers(2, 12)))
            n_pieces = len(states[0])
            idxs = sorted(rng.choice(n_pieces,
                                     size=rng.integers(1, n_pieces + 1),
                                     replace=False).tolist())
            spec = specs[i % len(specs)]
            got = pool(states, {0: idxs}, 0, spec)
            assert np.allclose(got, naive_pool(states, idxs, spec),
                               atol=1e-6)

    def test_pooling_linearity(self):
        rng = np.random.default_rng(3)
        states = random_states(rng)
        spec = LayerSpec(LayerMode.CONCAT_LAST_4)
        base = pool(states, {0: [0, 1]}, 0, spec)
        scaled = pool([3.0 * s for s in states], {0: [0, 1]}, 0, spec)
        assert np.allclose(scaled, 3.0 * base, atol=1e-5)

    def test_empty_piece_list_raises(self):
        rng = np.random.default_rng(4)
        with pytest.raises(ValueError, match="no aligned pieces"):
            pool(random_states(rng), {0: []}, 0, LayerSpec())

    def test_output_dims(self):
        assert LayerSpec(LayerMode.CONCAT_LAST_4).output_dim(1024) == 4096
        assert LayerSpec(LayerMode.SUM_LAST_4).output_dim(1024) == 1024
        assert LayerSpec(LayerMode.SINGLE_LAYER, layer=-1).output_dim(768) == 768

    def test_spec_parsing(self):
        assert LayerSpec.parse("concat4").mode is LayerMode.CONCAT_LAST_4
        assert LayerSpec.parse("sum4").mode is LayerMode.SUM_LAST_4
        spec = LayerSpec.parse("layer:-2")
        assert spec.mode is LayerMode.SINGLE_LAYER and spec.layer == -2
        with pytest.raises(ValueError):
            LayerSpec.parse("bogus")
