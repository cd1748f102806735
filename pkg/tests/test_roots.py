import cmath

import pytest

from corpus import c3, c3_total, disk, octahedron, torus7, triangle, winding_function
from rootres.complex import validate_complex
from rootres.errors import InvalidModulus, MeshTooCoarse, RootResError
from rootres.functions import SampledFunction, evaluate, make_log_function
from rootres.homology import cohomology
from rootres.roots import (
    ApproxRoot, ObstructionCertificate, ObstructionOnA, RootCertificate, _round_half_to_zero,
    approx_root, closedness_audit, exact_root, midpoint_subdivide, oscillation, unwrap_log,
)


def test_exact_root_c3_total_six():
    f = c3_total(6)
    cert = exact_root(f, 3)
    assert isinstance(cert, RootCertificate) and cert
    assert sum(cert.root.w(*e) for e in [(0, 1), (1, 2), (2, 0)]) == 2
    for s in c3().edges:
        assert evaluate(cert.root, s, [0.5, 0.5]) ** 3 == pytest.approx(evaluate(f, s, [0.5, 0.5]))
    assert cert.audit_error < 1e-9 and cert.verify()


def test_exact_root_obstruction():
    cert = exact_root(c3_total(1), 2)
    assert isinstance(cert, ObstructionCertificate) and not cert
    assert abs(cert.pairing) == 1 and cert.verify(c3_total(1).winding_vector())


def test_zero_winding_gives_principal_branch():
    f = make_log_function(triangle(), {0: 1 + 2j, 1: -0.4j, 2: 0.7}, {})
    cert = exact_root(f, 4)
    assert all(x == 0 for x in cert.root.winding.values())
    assert cert.root.vertex_log[0] == pytest.approx((1 + 2j) / 4)


def test_exact_root_rejects_bad_exponent():
    with pytest.raises(InvalidModulus):
        exact_root(c3_total(2), 1)


def test_root_on_torus_multiple_of_n():
    K = torus7()
    H = cohomology(K, 1)
    f = winding_function(K, 3 * H.basis[0] - 6 * H.basis[1], {v: complex(v, -v) for v in K.vertices})
    cert = exact_root(f, 3)
    assert cert and cert.verify()
    assert not exact_root(winding_function(K, H.basis[1]), 3)


def test_tampered_certificates_fail():
    cert = exact_root(c3_total(4), 2)
    bad = RootCertificate(cert.f, c3_total(2), 2, cert.witness, 0.0)
    assert not bad.verify()
    obs = exact_root(c3_total(3), 2)
    assert not ObstructionCertificate(obs.complex, 2 * obs.cycle, 2 * obs.pairing, 2).verify()


def test_round_half_to_zero():
    assert [_round_half_to_zero(x) for x in (0.5, -0.5, 1.5, -1.5, 0.49, -0.51, 2.0)] == [0, 0, 1, -1, 0, -1, 2]


def test_unwrap_recovers_winding():
    K = validate_complex([[i, (i + 1) % 6] for i in range(6)])
    for w in (0, 1, -2):
        F = SampledFunction(K, {i: cmath.exp(2j * cmath.pi * w * i / 6) for i in range(6)})
        f = unwrap_log(F, K.vertices)
        z = [f.w(i, (i + 1) % 6) for i in range(6)]
        assert sum(z) == w


def test_disk_approx_root_with_refinement():
    res = approx_root(disk(0), 2, 0.1, refine=True)
    assert isinstance(res, ApproxRoot)
    assert res.measured_error < 0.3 and res.bound == pytest.approx(0.3)
    assert res.refinements > 0
    assert oscillation(res.F)[0] < 0.05


def test_disk_winding_one_is_obstructed():
    res = approx_root(disk(1), 2, 0.1)
    assert isinstance(res, ObstructionOnA) and not res
    assert abs(res.certificate.pairing) == 1
    # the region is the boundary hexagon
    assert res.region.vertices == tuple(range(6))


def test_coarse_mesh_is_reported():
    with pytest.raises(MeshTooCoarse) as info:
        approx_root(disk(0), 2, 0.1)
    assert info.value.limit == pytest.approx(0.05)


def test_constant_function_has_constant_root():
    K = triangle()
    res = approx_root(SampledFunction(K, {v: 1.0 for v in K.vertices}), 3, 0.1)
    assert res.measured_error == pytest.approx(0, abs=1e-12)
    assert all(abs(res.root.vertex_value[v] - 1) < 1e-12 for v in K.vertices)


def test_circle_winding_one_is_obstructed_despite_coarse_mesh():
    K = c3()
    F = SampledFunction(K, {i: cmath.exp(2j * cmath.pi * i / 3) for i in range(3)})
    res = approx_root(F, 2, 0.1)
    assert isinstance(res, ObstructionOnA) and abs(res.certificate.pairing) == 1


def test_midpoint_subdivision_counts():
    F = SampledFunction(triangle(), {0: 0, 1: 1, 2: 1j})
    G = midpoint_subdivide(F)
    assert [len(level) for level in G.complex.simplices] == [6, 9, 4]
    assert G.complex.euler_characteristic() == 1
    with pytest.raises(RootResError):
        midpoint_subdivide(SampledFunction(validate_complex([[0, 1, 2, 3]]), {v: 1 for v in range(4)}))


def test_closedness_audit():
    rep = closedness_audit(triangle(), 2)
    assert rep.passed and len(rep.entries) == 8
    rep = closedness_audit(c3(), 2)
    assert not rep.passed and rep.first_failure.subset == (0, 1, 2)
    assert rep.first_failure.certificate.verify()
    assert closedness_audit(validate_complex([[0]]), 5).passed
    doc = closedness_audit(octahedron(), 3, max_subset_size=3).to_json()
    assert doc["verdict"] == "no obstruction found up to cap"
