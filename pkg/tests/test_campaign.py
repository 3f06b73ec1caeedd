import json
import random

import pytest

from fourier_minors import campaign, cyclotomic as cyc
from fourier_minors.bounds import zhang_threshold_holds
from fourier_minors.campaign import (
    CampaignConfig,
    CampaignTooLarge,
    Certificate,
    CertificationFailure,
    CheckpointError,
    certify,
    char_p_verify,
    chebotarev_property,
    load_checkpoint,
    norm_census,
    run_resume,
    tree_leaves,
    verify_family,
)
from fourier_minors.finite_field import build_field
from fourier_minors.minors import MinorSpec, ff_minor


def dump(rep):
    return json.dumps(rep, sort_keys=True)


# --- configuration ------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        CampaignConfig(order=4)
    CampaignConfig(order=4, allow_nonsquarefree=True)
    with pytest.raises(ValueError):
        CampaignConfig(order=7, max_size=4)
    with pytest.raises(ValueError):
        CampaignConfig(order=7, characteristic=7)
    with pytest.raises(ValueError):
        CampaignConfig(order=7, characteristic=4)
    with pytest.raises(ValueError):
        CampaignConfig(order=7, family="bogus")


def test_digest_ignores_workers_and_path(tmp_path):
    a = CampaignConfig(order=7)
    b = CampaignConfig(order=7, workers=3, checkpoint=str(tmp_path / "x"))
    assert a.digest() == b.digest()
    assert a.digest() != CampaignConfig(order=7, max_size=2).digest()


# --- verification -------------------------------------------------------------


@pytest.mark.parametrize("N", [2, 3, 5, 6, 7, 10, 11])
def test_small_orders_pass(N):
    rep = verify_family(CampaignConfig(order=N))
    assert rep["verdict"] == "pass" and rep["complete"]
    assert rep["members_covered"] == rep["family_members"]
    assert rep["witnesses"] == []


def test_negative_control_n4():
    rep = verify_family(CampaignConfig(order=4, allow_nonsquarefree=True))
    assert rep["verdict"] == "fail"
    assert rep["witnesses"] == [{"rows": [0, 2], "cols": [0, 2], "orbit_size": 2, "norm": "0x0"}]


@pytest.mark.parametrize("N", [8, 9])
def test_negative_controls(N):
    rep = verify_family(CampaignConfig(order=N, allow_nonsquarefree=True))
    assert rep["verdict"] == "fail" and rep["witnesses"]
    for w in rep["witnesses"]:
        assert MinorSpec(N, w["rows"], w["cols"]).order == N


def test_d_principal_and_all_families():
    for N, fam, d in [(6, "d-principal", 2), (6, "d-principal", 3), (10, "d-principal", 5), (7, "all", None)]:
        rep = verify_family(CampaignConfig(order=N, family=fam, d=d))
        assert rep["verdict"] == "pass"
        assert rep["members_covered"] == rep["family_members"]


def test_statuses_and_record_fields(tmp_path):
    path = tmp_path / "c.jsonl"
    run_resume(CampaignConfig(order=11, factor_budget=10**4), checkpoint=str(path))
    lines = path.read_text().splitlines()
    statuses = set()
    for line in lines:
        rec = json.loads(line)
        for f in ("schema_version", "config_digest", "orbit_key", "family", "status", "norm_hex", "factors", "micros", "backend"):
            assert f in rec
        statuses.add(rec["status"])
        if rec["status"] == "nonzero":
            n = int(rec["norm_hex"], 16)
            prod = 1
            for p, e, *rest in rec["factors"]:
                prod *= int(p, 16) ** e
            assert prod == abs(n)
    assert {"nonzero", "ap-certified", "skipped-by-complement"} <= statuses


# --- characteristic p ---------------------------------------------------------


def test_char_p_examples():
    assert char_p_verify(6, 5)["verdict"] == "pass"
    assert char_p_verify(5, 3)["verdict"] == "pass"
    rep = char_p_verify(7, 2)
    assert rep["verdict"] == "fail"
    assert {"rows": [0, 1, 3], "cols": [0, 1, 3], "orbit_size": 14, "norm": "0xab8"} in rep["witnesses"]
    with pytest.raises(ValueError):
        char_p_verify(6, 3)


def test_chebotarev_examples():
    assert chebotarev_property(7, 3).holds
    v = chebotarev_property(7, 2)
    assert not v.holds and v.witnesses
    assert chebotarev_property(5, 2).holds
    with pytest.raises(ValueError):
        chebotarev_property(7, 7)


@pytest.mark.parametrize("M,q", [(5, 2), (5, 3), (7, 2), (7, 3), (7, 13), (6, 5), (6, 7), (10, 3), (11, 23)])
def test_chebotarev_matches_finite_field_twists(M, q):
    from itertools import combinations

    ctx = build_field(M, q)
    twisted = False
    for m in range(1, M // 2 + 1):
        for A in combinations(range(M), m):
            for B in combinations(range(M), m):
                spec = MinorSpec(M, A, B)
                if any(ff_minor(spec, ctx, k).is_zero() for k in cyc.units(M)):
                    twisted = True
                    break
            if twisted:
                break
        if twisted:
            break
    assert chebotarev_property(M, q).holds == (not twisted)


def test_gen_zhang_small_range():
    import sympy

    for p in (3, 5):
        for q in sympy.primerange(2, 400):
            if q != p and zhang_threshold_holds(p, q).holds:
                assert chebotarev_property(p, q).holds, (p, q)


def test_norm_census():
    assert norm_census(7, 3) == {2: 1, 7: 5}
    assert set(norm_census(5, 3)) == {5}
    assert set(norm_census(3, 3)) == {3}
    assert set(norm_census(2, 2)) == {2}


# --- certification ----------------------------------------------------------------


@pytest.mark.parametrize("N", [30, 42, 15, 21])
def test_certify_char_p_lift(N):
    cert = certify(N)
    assert isinstance(cert, Certificate) and cert.rule == "char-p-lift"
    assert cert.tree["split"]["p"] * cert.tree["split"]["n_prime"] == N
    assert all(leaf["witnesses"] == 0 and leaf["complete"] for leaf in tree_leaves(cert.tree))


def test_certify_six_p_uses_six():
    for N in (30, 42):
        assert certify(N).tree["split"]["n_prime"] == 6


def test_certify_pinned_split():
    cert = certify(15, split=3)
    assert cert.tree["split"] == {"p": 3, "n_prime": 5}
    with pytest.raises(ValueError):
        certify(15, split=7)


def test_certify_prime():
    cert = certify(13)
    assert cert.rule == "prime-order"


def test_certify_threshold_chain():
    cert = certify(174, strategy=["threshold-chain"])
    assert cert.rule == "threshold-chain"
    step = cert.tree["children"][1]["threshold"]
    assert step["holds"] and step["threshold_floor"] == 27 and step["threshold_exact"]


def test_certify_hadamard_lift():
    cert = certify(6, strategy=["hadamard-lift"])
    assert cert.rule == "hadamard-lift"


def test_certify_failure_lists_near_misses():
    res = certify(14, strategy=["char-p-lift"], split=2)
    assert isinstance(res, CertificationFailure)
    miss = res.attempts[0]["near_misses"][0]
    assert miss["p"] == 2 and miss["n_prime"] == 7 and miss["witnesses"]
    with pytest.raises(ValueError):
        certify(12)
    with pytest.raises(ValueError):
        certify(15, strategy=["bogus"])


def test_certified_orders_agree_with_enumeration():
    for N in (6, 10, 14, 15, 21):
        cert = certify(N)
        assert isinstance(cert, Certificate)
        if cert.rule in ("char-p-lift", "threshold-chain"):
            assert verify_family(CampaignConfig(order=N))["verdict"] == "pass"


@pytest.mark.parametrize("N", [6, 10, 14, 15])
def test_nprime_principal_families(N):
    for p in cyc.prime_divisors(N):
        rep = verify_family(CampaignConfig(order=N, family="nprime-principal", d=N // p))
        assert rep["verdict"] == "pass" and rep["members_covered"] == rep["family_members"]


# --- checkpoints and determinism --------------------------------------------------


def test_resume_gives_identical_report(tmp_path):
    cfg = CampaignConfig(order=13)
    full = run_resume(cfg)
    total = full["orbits"] + len(campaign._complement_records(cfg))
    path = str(tmp_path / "ck.jsonl")
    part = run_resume(cfg, checkpoint=path, max_records=total // 2)
    assert part["verdict"] == "incomplete" and not part["complete"]
    assert dump(run_resume(cfg, checkpoint=path)) == dump(full)
    # resuming a finished run changes nothing
    size = len(open(path).read())
    assert dump(run_resume(cfg, checkpoint=path)) == dump(full)
    assert len(open(path).read()) == size


def test_random_interruptions(tmp_path):
    cfg = CampaignConfig(order=11)
    full = dump(run_resume(cfg))
    rng = random.Random(5)
    path = str(tmp_path / "ck.jsonl")
    for _ in range(30):
        rep = run_resume(cfg, checkpoint=path, max_records=rng.randint(0, 5))
        if rep["complete"]:
            break
    assert dump(run_resume(cfg, checkpoint=path)) == full


def test_torn_tail_is_dropped(tmp_path):
    cfg = CampaignConfig(order=11)
    full = dump(run_resume(cfg))
    path = tmp_path / "ck.jsonl"
    run_resume(cfg, checkpoint=str(path), max_records=4)
    with open(path, "a") as fh:
        fh.write('{"schema_version": 1, "orbit')
    assert dump(run_resume(cfg, checkpoint=str(path))) == full
    for line in path.read_text().splitlines():
        json.loads(line)


def test_digest_mismatch(tmp_path):
    path = str(tmp_path / "ck.jsonl")
    run_resume(CampaignConfig(order=11), checkpoint=path, max_records=3)
    with pytest.raises(CheckpointError):
        run_resume(CampaignConfig(order=11, max_size=3), checkpoint=path)


def test_checksum_corruption(tmp_path):
    path = tmp_path / "ck.jsonl"
    run_resume(CampaignConfig(order=11), checkpoint=str(path), max_records=3)
    lines = path.read_text().splitlines()
    rec = json.loads(lines[1])
    rec["status"] = "zero-witness"
    lines[1] = json.dumps(rec)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CheckpointError):
        load_checkpoint(str(path), CampaignConfig(order=11).digest())


def test_empty_checkpoint_is_fresh_run(tmp_path):
    path = tmp_path / "ck.jsonl"
    path.write_text("")
    cfg = CampaignConfig(order=7)
    assert dump(run_resume(cfg, checkpoint=str(path))) == dump(run_resume(cfg))


def test_reports_identical_across_worker_counts():
    for N, fam, d in [(15, "principal", None), (10, "d-principal", 2)]:
        one = run_resume(CampaignConfig(order=N, family=fam, d=d))
        two = run_resume(CampaignConfig(order=N, family=fam, d=d, workers=2))
        assert dump(one) == dump(two)


def test_refuses_oversized_campaign():
    with pytest.raises(CampaignTooLarge):
        run_resume(CampaignConfig(order=66))
