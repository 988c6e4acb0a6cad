"""Unit tests for the numpy MLP, Adam, soft updates and the replay buffer."""

import numpy as np
import pytest

from freqalloc_core.errors import BufferNotReadyError, FormatError, StaleCacheError
from freqalloc_core.neural import (
    AdamState,
    Mlp,
    OutputActivation,
    ReplayBuffer,
    Transition,
    adam_step,
    buffer_push,
    buffer_sample,
    load_mlp,
    save_mlp,
    soft_update,
    softmax_groups,
    stack_batch,
)


def _transition(i: int) -> Transition:
    return Transition(np.array([float(i)]), np.array([0.0]), float(i), np.array([float(i + 1)]))


def test_identity_layers_pass_nonnegative_input():
    net = Mlp.from_parameters([np.eye(3), np.eye(3)], [np.zeros(3), np.zeros(3)])
    x = np.array([0.0, 1.5, 2.0])
    np.testing.assert_array_equal(net.predict(x), x)


def test_forward_matches_straight_line_computation():
    net = Mlp([4, 8, 8, 2], rng=np.random.default_rng(0))
    x = np.random.default_rng(1).standard_normal((5, 4))
    w0, w1, w2 = net.weights
    b0, b1, b2 = net.biases
    h1 = np.maximum(x @ w0.T + b0, 0)
    h2 = np.maximum(h1 @ w1.T + b1, 0)
    expected = h2 @ w2.T + b2
    assert np.max(np.abs(net.predict(x) - expected)) <= 1e-12


def test_softmax_output_sums_to_one_per_group():
    net = Mlp([3, 6, 8], OutputActivation.SOFTMAX, group_size=4, rng=np.random.default_rng(2))
    y = net.predict(np.ones(3))
    np.testing.assert_allclose(y.reshape(2, 4).sum(axis=1), 1.0)
    assert np.all(y > 0)


def test_softmax_groups_is_shift_invariant():
    z = np.array([[1.0, 2.0, 3.0, 1000.0, 1001.0, 1002.0]])
    y = softmax_groups(z, 3)
    np.testing.assert_allclose(y[0, :3], y[0, 3:])


def test_single_neuron_gradient():
    net = Mlp.from_parameters([np.array([[1.0]])], [np.zeros(1)])
    y, cache = net.forward(np.array([1.0]))
    grads = net.backward(cache, -2.0 * (2.0 - y))
    assert grads.weights[0][0, 0] == pytest.approx(-2.0)


@pytest.mark.parametrize("output", [OutputActivation.IDENTITY, OutputActivation.SOFTMAX])
def test_backward_matches_finite_differences(output):
    rng = np.random.default_rng(3)
    net = Mlp([3, 5, 4, 6], output, group_size=3, rng=rng)
    for b in net.biases:
        b[:] = rng.uniform(0.1, 0.3, size=b.shape)
    x = rng.standard_normal((2, 3))
    target = rng.standard_normal((2, 6))

    def loss() -> float:
        return float(0.5 * np.sum((net.predict(x) - target) ** 2))

    y, cache = net.forward(x)
    grads = net.backward(cache, y - target)
    step = 1e-5
    for param, grad in zip(net.parameters(), grads.as_list(), strict=True):
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + step
            up = loss()
            param[index] = original - step
            down = loss()
            param[index] = original
            numeric = (up - down) / (2 * step)
            assert abs(numeric - grad[index]) <= 1e-4 * max(1.0, abs(numeric))


def test_zero_output_gradient_gives_zero_gradients():
    net = Mlp([3, 4, 2], rng=np.random.default_rng(4))
    _, cache = net.forward(np.ones((2, 3)))
    grads = net.backward(cache, np.zeros((2, 2)))
    assert all(not g.any() for g in grads.as_list())


def test_stale_cache_rejected():
    net = Mlp([2, 3, 1])
    _, cache = net.forward(np.ones(2))
    net.mark_updated()
    with pytest.raises(StaleCacheError):
        net.backward(cache, np.ones(1))


def test_adam_first_step():
    theta = np.array([1.0])
    state = AdamState([theta])
    adam_step([theta], [2.0 * theta], state, lr=0.1)
    assert theta[0] == pytest.approx(0.9, abs=1e-9)


def test_adam_zero_gradient_leaves_parameters():
    theta = np.array([0.5, -1.0])
    state = AdamState([theta])
    for _ in range(50):
        adam_step([theta], [np.zeros(2)], state, lr=0.1)
    np.testing.assert_array_equal(theta, [0.5, -1.0])


def test_soft_update_rates():
    target = Mlp.from_parameters([np.zeros((1, 1))], [np.zeros(1)])
    online = Mlp.from_parameters([np.full((1, 1), 2.0)], [np.full(1, 2.0)])
    soft_update(target, online, 0.5)
    assert target.weights[0][0, 0] == 1.0
    assert target.biases[0][0] == 1.0

    before = [p.copy() for p in target.parameters()]
    soft_update(target, online, 0.0)
    for p, q in zip(target.parameters(), before, strict=True):
        np.testing.assert_array_equal(p, q)

    soft_update(target, online, 1.0)
    for p, q in zip(target.parameters(), online.parameters(), strict=True):
        np.testing.assert_array_equal(p, q)


def test_soft_update_contracts_distance_to_online():
    rng = np.random.default_rng(12)
    for _ in range(10):
        sizes = [int(n) for n in rng.integers(1, 6, size=int(rng.integers(2, 5)))]
        target = Mlp(sizes, rng=rng)
        online = Mlp(sizes, rng=rng)
        tau = float(rng.uniform(0.0, 1.0))
        before = np.sqrt(sum(np.sum((t - o) ** 2) for t, o in zip(target.parameters(), online.parameters(), strict=True)))
        soft_update(target, online, tau)
        after = np.sqrt(sum(np.sum((t - o) ** 2) for t, o in zip(target.parameters(), online.parameters(), strict=True)))
        assert after == pytest.approx((1.0 - tau) * before, rel=1e-9, abs=1e-12)


def test_replay_buffer_evicts_oldest():
    buffer = ReplayBuffer(5)
    for i in range(1, 7):
        buffer_push(buffer, _transition(i))
    assert len(buffer) == 5
    assert [t.reward for t in buffer] == [2.0, 3.0, 4.0, 5.0, 6.0]


def test_replay_buffer_sample_and_not_ready():
    buffer = ReplayBuffer(10)
    for i in range(3):
        buffer.push(_transition(i))
    batch = buffer_sample(buffer, 3, np.random.default_rng(0))
    assert all(t.reward in (0.0, 1.0, 2.0) for t in batch)
    with pytest.raises(BufferNotReadyError):
        buffer.sample(4, np.random.default_rng(0))
    stacked = stack_batch(batch)
    assert stacked.states.shape == (3, 1)
    assert stacked.rewards.shape == (3,)


def test_replay_buffer_sampling_is_uniform():
    buffer = ReplayBuffer(4)
    for i in range(4):
        buffer.push(_transition(i))
    rng = np.random.default_rng(5)
    draws = 100_000
    rewards = np.array([t.reward for _ in range(draws // 4) for t in buffer.sample(4, rng)])
    assert rewards.size == draws
    sigma = np.sqrt(draws * 0.25 * 0.75)
    for i in range(4):
        assert abs(np.sum(rewards == i) - draws * 0.25) <= 3 * sigma


def test_mlp_file_round_trip(tmp_path):
    net = Mlp([4, 8, 6], OutputActivation.SOFTMAX, group_size=3, rng=np.random.default_rng(6))
    path = save_mlp(net, tmp_path / "actor.mlp")
    loaded = load_mlp(path)
    assert loaded.sizes == net.sizes
    assert loaded.output is OutputActivation.SOFTMAX
    assert loaded.group_size == 3
    x = np.ones(4)
    np.testing.assert_array_equal(loaded.predict(x), net.predict(x))


def test_mlp_file_bad_magic(tmp_path):
    path = tmp_path / "bad.mlp"
    path.write_bytes(b"XXXX" + bytes(8))
    with pytest.raises(FormatError):
        load_mlp(path)
