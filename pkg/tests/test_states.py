import math

import numpy as np
import pytest

from twinprep import protocol, states
from twinprep.errors import (
    DimensionMismatch,
    DuplicateLabel,
    EmptyKeepSet,
    NotUnitary,
    UnknownLabel,
)

from conftest import binary_entropy_bits, random_state_vector, random_unitary

SZ = np.diag([1.0, -1.0]).astype(complex)
MINUS_I_SY = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


def test_ket_index_convention():
    # leftmost label is the most significant bit of the amplitude index
    s = states.ket("101", ("A", "B", "C"))
    assert s.amplitudes[5] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1
    assert states.ket("000", ("A", "B", "C")).amplitudes[0] == 1.0


def test_ket_rejects_duplicates():
    with pytest.raises(DuplicateLabel):
        states.ket("00", ("A", "A"))


def test_state_norm_enforced():
    with pytest.raises(ValueError):
        states.StateVector(("A",), np.array([1.0, 1.0]))


def test_apply_sz():
    s = states.apply_single_qubit(SZ, "A", states.ket("1", ("A",)))
    assert s.amplitudes[1] == -1.0


def test_apply_rotation_rows():
    up = states.apply_single_qubit(MINUS_I_SY, "A", states.ket("0", ("A",)))
    down = states.apply_single_qubit(MINUS_I_SY, "A", states.ket("1", ("A",)))
    assert np.allclose(up.amplitudes, [0.0, 1.0])
    assert np.allclose(down.amplitudes, [-1.0, 0.0])


def test_rotation_cubed_maps_clone_states():
    # term-by-term expansion of the alpha^2 = 2/3 clone pair
    a, b = math.sqrt(2 / 3), math.sqrt(1 / 6)
    phi0 = np.zeros(8, dtype=complex)
    phi0[0b000], phi0[0b101], phi0[0b110] = a, b, b
    phi1 = np.zeros(8, dtype=complex)
    phi1[0b111], phi1[0b001], phi1[0b010] = a, b, b
    s = states.StateVector(("A", "B", "C"), phi0)
    for label in ("A", "B", "C"):
        s = states.apply_single_qubit(MINUS_I_SY, label, s)
    assert np.max(np.abs(s.amplitudes - phi1)) <= 1e-15


def test_apply_rejects_bad_gate_and_label():
    with pytest.raises(NotUnitary):
        states.apply_single_qubit(np.ones((2, 2)), "A", states.ket("0", ("A",)))
    with pytest.raises(UnknownLabel):
        states.apply_single_qubit(SZ, "X", states.ket("0", ("A",)))


def test_apply_preserves_norm():
    rng = np.random.default_rng(3)
    for _ in range(10):
        s = random_state_vector(rng, ("A", "B", "C"))
        out = states.apply_single_qubit(random_unitary(rng), "B", s)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) <= 1e-12


def test_measure_computational_certain():
    basis = states.Basis2(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    res = states.measure_in_basis(states.ket("01", ("A", "B")), "A", basis)
    assert res.probabilities[0] == pytest.approx(1.0, abs=1e-14)
    assert res.probabilities[1] == 0.0
    assert res.posts[1] is None
    assert np.allclose(res.posts[0].amplitudes, [0.0, 1.0])
    assert res.posts[0].labels == ("B",)


def test_measure_resource_is_unbiased():
    spec = protocol.ProtocolSpec.equatorial(1.3)
    res = states.measure_in_basis(
        protocol.resource_for(spec), "a", protocol.alice_basis(spec)
    )
    assert res.probabilities[0] == pytest.approx(0.5, abs=1e-10)
    assert res.probabilities[1] == pytest.approx(0.5, abs=1e-10)


def test_perpendicular_branch_is_shared_state():
    spec = protocol.ProtocolSpec.equatorial(2.1)
    res = states.measure_in_basis(
        protocol.resource_for(spec), "a", protocol.alice_basis(spec)
    )
    xi = protocol.one_parameter_tripartite(spec)
    # equality up to the outcome-dependent global phase
    assert abs(res.posts[1].overlap(xi)) == pytest.approx(1.0, abs=1e-12)


def test_measure_probabilities_random_states():
    rng = np.random.default_rng(23)
    for _ in range(10):
        s = random_state_vector(rng, ("A", "B", "C"))
        u = random_unitary(rng)
        basis = states.Basis2(u[:, 0], u[:, 1])
        res = states.measure_in_basis(s, "B", basis)
        assert res.probabilities[0] + res.probabilities[1] == pytest.approx(1.0, abs=1e-10)
        for post in res.posts:
            if post is not None:
                assert abs(np.linalg.norm(post.amplitudes) - 1.0) <= 1e-10


def test_density_of_examples():
    assert np.allclose(states.density_of(states.ket("0", ("A",))).matrix, np.diag([1.0, 0.0]))
    target = protocol.equatorial_target(0.0)
    assert np.allclose(states.density_of(target).matrix, np.full((2, 2), 0.5))


def test_partial_trace_product_state():
    rng = np.random.default_rng(9)
    left = random_state_vector(rng, ("A",))
    right = random_state_vector(rng, ("B",))
    joint = states.StateVector(("A", "B"), np.kron(left.amplitudes, right.amplitudes))
    out = states.partial_trace(states.density_of(joint), ("A",))
    assert np.max(np.abs(out.matrix - states.density_of(left).matrix)) <= 1e-12


def test_partial_trace_ghz():
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1 / math.sqrt(2)
    ghz = states.StateVector(("A", "B", "C"), amps)
    out = states.partial_trace(states.density_of(ghz), ("B",))
    assert np.max(np.abs(out.matrix - np.eye(2) / 2)) <= 1e-12


def test_partial_trace_shared_state_marginal():
    phi = 0.8
    xi = protocol.one_parameter_tripartite(protocol.ProtocolSpec.equatorial(phi))
    out = states.partial_trace(states.density_of(xi), ("B",))
    off = np.exp(-1j * phi) / (2 * math.sqrt(2))
    expected = np.array([[0.5, off], [np.conj(off), 0.5]])
    assert np.max(np.abs(out.matrix - expected)) <= 1e-12


def test_partial_trace_order_independent():
    rng = np.random.default_rng(31)
    rho = states.density_of(random_state_vector(rng, ("A", "B", "C")))
    via_a = states.partial_trace(states.partial_trace(rho, ("B", "C")), ("B",))
    via_c = states.partial_trace(states.partial_trace(rho, ("A", "B")), ("B",))
    direct = states.partial_trace(rho, ("B",))
    assert np.max(np.abs(via_a.matrix - direct.matrix)) <= 1e-12
    assert np.max(np.abs(via_c.matrix - direct.matrix)) <= 1e-12


def test_partial_trace_errors():
    rho = states.density_of(states.ket("00", ("A", "B")))
    with pytest.raises(UnknownLabel):
        states.partial_trace(rho, ("X",))
    with pytest.raises(EmptyKeepSet):
        states.partial_trace(rho, ())


def test_fidelity_examples():
    target = protocol.equatorial_target(0.4)
    assert states.fidelity_with_pure(states.density_of(target), target) == pytest.approx(1.0)
    xi = protocol.one_parameter_tripartite(protocol.ProtocolSpec.equatorial(0.4))
    marginal = states.partial_trace(states.density_of(xi), ("B",))
    assert states.fidelity_with_pure(marginal, target) == pytest.approx(
        0.5 + 1 / (2 * math.sqrt(2)), abs=1e-12
    )
    with pytest.raises(DimensionMismatch):
        states.fidelity_with_pure(marginal, states.ket("00", ("A", "B")))


def test_fidelity_polar_marginal():
    spec = protocol.ProtocolSpec.polar(0.6)
    xi = protocol.one_parameter_tripartite(spec)
    marginal = states.partial_trace(states.density_of(xi), ("B",))
    target = protocol.polar_target(0.6)
    assert states.fidelity_with_pure(marginal, target) == pytest.approx(5 / 6, abs=1e-12)


def test_entropy_examples():
    pure = states.density_of(states.ket("0", ("A",)))
    assert states.von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-12)
    mixed = states.DensityMatrix(("A",), np.eye(2) / 2)
    assert states.von_neumann_entropy(mixed) == pytest.approx(1.0, abs=1e-12)
    p = 0.5 + 1 / (2 * math.sqrt(2))
    xi = protocol.one_parameter_tripartite(protocol.ProtocolSpec.equatorial(1.9))
    marginal = states.partial_trace(states.density_of(xi), ("B",))
    assert states.von_neumann_entropy(marginal) == pytest.approx(
        binary_entropy_bits(p), abs=1e-12
    )
    # frozen reference point from the closed-form spectrum
    assert binary_entropy_bits(p) == pytest.approx(0.6008760366928562, abs=1e-12)


def test_entropy_unitary_invariance():
    rng = np.random.default_rng(41)
    from conftest import random_density

    rho = states.DensityMatrix(("A", "B"), random_density(rng))
    s0 = states.von_neumann_entropy(rho)
    u = np.kron(random_unitary(rng), random_unitary(rng))
    rotated = states.DensityMatrix(("A", "B"), u @ rho.matrix @ u.conj().T)
    assert states.von_neumann_entropy(rotated) == pytest.approx(s0, abs=1e-10)


def test_relative_entropy_self_is_zero():
    rng = np.random.default_rng(43)
    from conftest import random_density

    rho = states.DensityMatrix(("A", "B"), random_density(rng))
    assert states.relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)


def test_relative_entropy_pure_vs_mixed():
    rho = states.density_of(states.ket("0", ("A",)))
    sigma = states.DensityMatrix(("A",), np.eye(2) / 2)
    assert states.relative_entropy(rho, sigma) == pytest.approx(1.0, abs=1e-12)


def test_relative_entropy_disjoint_support():
    rho = states.density_of(states.ket("0", ("A",)))
    sigma = states.density_of(states.ket("1", ("A",)))
    out = states.relative_entropy(rho, sigma)
    assert states.is_divergent(out)
    assert repr(out) == "DIVERGENT"


def test_relative_entropy_nonnegative():
    rng = np.random.default_rng(47)
    from conftest import random_density

    for _ in range(8):
        rho = states.DensityMatrix(("A", "B"), random_density(rng))
        sigma = states.DensityMatrix(("A", "B"), random_density(rng))
        value = states.relative_entropy(rho, sigma)
        assert value >= -1e-10
        close = np.max(np.abs(rho.matrix - sigma.matrix)) <= 1e-8
        assert (value <= 1e-10) == close


def test_relative_entropy_dimension_mismatch():
    rho = states.density_of(states.ket("0", ("A",)))
    sigma = states.DensityMatrix(("A", "B"), np.eye(4) / 4)
    with pytest.raises(DimensionMismatch):
        states.relative_entropy(rho, sigma)
