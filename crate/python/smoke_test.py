"""Smoke test for the sparsecut Python bindings."""

import math

import sparsecut as sc


def main():
    # path 0-1-2 against the far pair (0, 2): every cut has sparsity 1/2
    path = sc.Instance(3, [(0, 1, 1.0), (1, 2, 1.0)], [(0, 2, 1.0)])
    assert path.n == 3
    members, sigma = sc.brute_force_opt(path)
    assert 0 in members and abs(sigma - 0.5) < 1e-15, (members, sigma)
    assert abs(path.sparsity([0]) - 0.5) < 1e-15
    assert path.sparsity([]) == math.inf

    again = sc.Instance.from_text(path.to_text())
    assert again.to_text() == path.to_text()

    inst = sc.gen_random(9, seed=2, density=0.5, rank1=True)
    spectral = sc.solve_spectral(inst)
    lr = sc.solve_leighton_rao(inst)
    sdp = sc.solve_goemans_linial(inst)
    _, opt = sc.brute_force_opt(inst)
    assert spectral.value <= sdp.value + 1e-6 and sdp.value <= opt + 1e-6
    assert lr.value <= opt + 1e-6
    assert len(spectral.potentials) == 9 and sdp.witness.startswith("# sdp")

    _, swept = sc.sweep_cut(spectral.potentials, inst)
    assert swept >= opt - 1e-12

    cert = sc.round_rank1(inst, seed=7)
    assert cert.bound_holds and cert.sigma >= opt - 1e-12
    assert cert.sigma <= 8 * math.sqrt(cert.relax_value) + 1e-7
    assert cert.branch in ("frechet", "cauchy-schwarz")
    assert sc.round_rank1(inst, seed=7).text == cert.text

    general = sc.gen_random(8, seed=3)
    uniform = sc.Instance(8, [(0, 1, 1.0)], [(u, v, 1.0) for u in range(8) for v in range(u, 8)])
    approx = sc.round_rank1_via_approx(general, uniform, seed=1)
    assert approx.bound_holds

    st = sc.st_certificate(path, 0, 2)
    assert abs(st.epsilon - 0.25) < 1e-12 and st.holds
    assert abs(st.flow_value - st.epsilon) < 1e-8
    assert st.potentials[0] == 0.0 and st.potentials[2] == 1.0

    mixed = sc.mix_instance(path, 0.5, 0.5)
    assert abs(sc.brute_force_opt(mixed)[1] - 0.5) < 1e-15

    lolli, witness = sc.gen_lollipop(4, seed=0)
    assert lolli.n == 8 and len(witness) == 8
    assert sc.solve_spectral(lolli).value <= lolli.sparsity([0])

    expander = sc.gen_expander_clique(12, seed=0)
    assert expander.n == 12

    try:
        sc.brute_force_opt(sc.gen_random(30, seed=0))
    except ValueError as e:
        assert "too large" in str(e)
    else:
        raise AssertionError("oracle accepted n = 30")

    print("smoke test passed")


if __name__ == "__main__":
    main()
