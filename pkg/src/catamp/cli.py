"""Sweep runner, CSV emitter and self-check command.

Subcommands:
    hes-sweep    closed-form fidelity/gain/Fisher sweep for hybrid qudits
    scs-sweep    optimizer-driven sweep for cat-state qudits
    prob-sweep   heralded success probabilities (requires --gamma)
    crossing     locate the Fisher-ratio unit crossing and its minimum
    check        run the invariant suites (quick|full)

Configs are flat key=value files; command-line flags override file entries.
Exit codes: 0 success, 1 check failure, 2 usage error, 3 numeric/truncation error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import amplify, analytic, channel, fock, optimize, states
from .analytic import Scheme
from .errors import CatampError
from .states import HesSpec, ScsSpec

CSV_HEADER = "alpha,d,k,scheme,F_opt,G,qfi_in,qfi_out,qfi_ratio,p_success,trunc_used,status"


@dataclass
class SweepConfig:
    family: str  # "hes" | "scs"
    d: int
    k_list: tuple[int, ...]
    scheme: str  # "aadag" | "adag2"
    alpha_min: float
    alpha_max: float
    steps: int
    gamma: float | None = None
    trunc: int | None = None  # fixed truncation; None selects the tail policy
    out: str | None = None

    def __post_init__(self):
        if self.family not in ("hes", "scs"):
            raise ValueError("family must be 'hes' or 'scs'")
        analytic.as_scheme(self.scheme)
        if not self.alpha_min < self.alpha_max:
            raise ValueError("alpha_min must be < alpha_max")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if any(not 0 <= k < self.d for k in self.k_list):
            raise ValueError("every k must satisfy 0 <= k < d")


@dataclass
class SweepRecord:
    alpha: float
    d: int
    k: int
    scheme: str
    F_opt: float | None = None
    G: float | None = None
    qfi_in: float | None = None
    qfi_out: float | None = None
    qfi_ratio: float | None = None
    p_success: float | None = None
    trunc_used: int = 0
    status: str = "ok"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def _cell_trunc(alpha: float, cfg: SweepConfig) -> int:
    if cfg.trunc is not None:
        return cfg.trunc
    return max(30, fock.auto_trunc(alpha, additions=2))


def _run_cell(cfg: SweepConfig, alpha: float, k: int) -> SweepRecord:
    scheme = analytic.as_scheme(cfg.scheme)
    rec = SweepRecord(alpha=alpha, d=cfg.d, k=k, scheme=scheme.value,
                      trunc_used=_cell_trunc(alpha, cfg))
    try:
        if cfg.family == "hes":
            g = analytic.hes_gain(alpha, scheme)
            rec.G = g
            rec.F_opt = analytic.hes_fidelity(alpha, g, scheme)
            rec.qfi_in = analytic.hes_qfi(alpha)
            rec.qfi_out = analytic.hes_qfi(alpha, scheme)
            rec.qfi_ratio = analytic.qfi_ratio(alpha)
            if cfg.gamma is not None:
                h = states.hes_state(HesSpec(alpha, cfg.d, k), rec.trunc_used)
                rec.p_success = channel.scheme_success_prob(h, scheme, cfg.gamma)
        else:
            spec = ScsSpec(alpha, cfg.d, k)
            opt = optimize.scs_gain(spec, scheme)
            rec.G = opt.argmax
            rec.F_opt = opt.value
            rec.qfi_in = analytic.scs_qfi(alpha, cfg.d, k)
            rec.qfi_out = analytic.scs_qfi(alpha, cfg.d, k, scheme)
            rec.qfi_ratio = analytic.qfi_ratio(alpha, cfg.d, k)
            if cfg.gamma is not None:
                v = states.scs_state(spec, rec.trunc_used)
                rec.p_success = channel.scheme_success_prob(v, scheme, cfg.gamma)
    except (CatampError, ValueError, ArithmeticError) as exc:
        rec.status = f"error: {type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
    return rec


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """One record per (k, alpha), ordered by (k, alpha); cell errors land in the row."""
    alphas = np.linspace(cfg.alpha_min, cfg.alpha_max, cfg.steps)
    return [_run_cell(cfg, float(a), k) for k in sorted(cfg.k_list) for a in alphas]


def format_csv(records: list[SweepRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    _fmt(r.alpha), str(r.d), str(r.k), r.scheme,
                    _fmt(r.F_opt), _fmt(r.G), _fmt(r.qfi_in), _fmt(r.qfi_out),
                    _fmt(r.qfi_ratio), _fmt(r.p_success), str(r.trunc_used), r.status,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def emit_csv(records: list[SweepRecord], path: str) -> None:
    """Write records deterministically: fixed header, 12 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(records))


def parse_csv(path: str) -> list[SweepRecord]:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")

    def opt_float(s: str) -> float | None:
        return None if s == "" else float(s)

    out = []
    for ln in lines[1:]:
        if not ln:
            continue
        f = ln.split(",")
        out.append(
            SweepRecord(
                alpha=float(f[0]), d=int(f[1]), k=int(f[2]), scheme=f[3],
                F_opt=opt_float(f[4]), G=opt_float(f[5]), qfi_in=opt_float(f[6]),
                qfi_out=opt_float(f[7]), qfi_ratio=opt_float(f[8]),
                p_success=opt_float(f[9]), trunc_used=int(f[10]), status=f[11],
            )
        )
    return out


# ---------------------------------------------------------------------------
# self-check suites


def _grids(level: str):
    if level == "quick":
        return dict(alphas=(0.5, 1.5, 2.5), gains=(0.8, 1.4, 2.0), dims=(1, 2, 3),
                    gammas=(0.01,), bell_alphas=(0.5, 1.0))
    return dict(alphas=tuple(np.arange(0.3, 3.01, 0.3)), gains=tuple(np.arange(0.8, 2.01, 0.2)),
                dims=(1, 2, 3, 4, 5), gammas=(0.001, 0.01, 0.1), bell_alphas=(0.5, 1.0, 2.0))


def _brute_scs_fidelity(alpha, g, d, k, scheme) -> float:
    word = analytic.scheme_word(scheme)
    tk = analytic.target_index(k, d, scheme)
    trunc = fock.auto_trunc(max(alpha, g * alpha), additions=2)
    amped, _ = amplify.scs_amplified(ScsSpec(alpha, d, k), word, trunc)
    target = states.scs_state(ScsSpec(g * alpha, d, tk), amped.trunc)
    return abs(fock.inner(target, amped)) ** 2


def _check_ladder_algebra(g):
    n = 24
    for m in range(n - 1):
        v = fock.basis(m, n)
        up_down = fock.ladder(fock.ladder(v, "add"), "subtract")
        assert abs(fock.inner(v, up_down) - (m + 1)) < 1e-12, f"a a-dagger |{m}>"
        down_up = fock.ladder(fock.ladder(v, "subtract"), "add")
        assert abs(fock.inner(v, down_up) - m) < 1e-12, f"a-dagger a |{m}>"


def _check_gram_identities(g):
    for d in g["dims"]:
        if d < 2:
            continue
        for alpha in g["bell_alphas"]:
            trunc = fock.auto_trunc(alpha)
            vs = [states.scs_state(ScsSpec(alpha, d, k), trunc) for k in range(d)]
            for i in range(d):
                for j in range(d):
                    want = 1.0 if i == j else 0.0
                    got = fock.inner(vs[i], vs[j])
                    assert abs(got - want) < 1e-10, f"scs gram d={d} alpha={alpha}"
            hs = [states.hes_state(HesSpec(alpha, d, k), trunc) for k in range(d)]
            for i in range(d):
                for j in range(d):
                    want = 1.0 if i == j else 0.0
                    got = states.hybrid_inner(hs[i], hs[j])
                    assert abs(got - want) < 1e-10, f"hes gram d={d} alpha={alpha}"


def _check_pseudo_number(g):
    for d in g["dims"]:
        if d < 2:
            continue
        for alpha in g["bell_alphas"]:
            for k in range(d):
                v = states.scs_state(ScsSpec(alpha, d, k), fock.auto_trunc(alpha))
                p = states.photon_distribution(v)
                off = sum(p[m] for m in range(p.size) if (m - k) % d != 0)
                assert off <= 1e-20, f"pseudo-number d={d} k={k}"


def _check_hes_fidelity_equivalence(g):
    for alpha in g["alphas"]:
        for gain in g["gains"]:
            for scheme in Scheme:
                closed = analytic.hes_fidelity(alpha, gain, scheme)
                brute = _brute_scs_fidelity(alpha, gain, 1, 0, scheme)
                assert abs(closed - brute) < 1e-8, (
                    f"hes fidelity equivalence alpha={alpha} g={gain} {scheme.value}"
                )


def _check_scs_fidelity_equivalence(g):
    for d in g["dims"]:
        for k in range(d):
            for alpha in g["alphas"]:
                for gain in g["gains"]:
                    for scheme in Scheme:
                        closed = analytic.scs_fidelity(alpha, gain, d, k, scheme)
                        brute = _brute_scs_fidelity(alpha, gain, d, k, scheme)
                        assert abs(closed - brute) < 1e-8, (
                            f"scs fidelity equivalence a={alpha} g={gain} d={d} k={k}"
                        )


def _check_qfi_equivalence(g):
    for d in g["dims"]:
        for k in range(d):
            for alpha in g["alphas"]:
                trunc = fock.auto_trunc(alpha, additions=2)
                spec = ScsSpec(alpha, d, k)
                v = states.scs_state(spec, trunc)
                _, var = fock.moments(v)
                closed = analytic.scs_qfi(alpha, d, k)
                assert abs(closed - 4 * var) <= 1e-8 * max(1.0, closed), "bare qfi"
                for scheme in Scheme:
                    amped, _ = amplify.scs_amplified(spec, analytic.scheme_word(scheme), trunc)
                    _, var = fock.moments(amped)
                    closed = analytic.scs_qfi(alpha, d, k, scheme)
                    assert abs(closed - 4 * var) <= 1e-8 * max(1.0, closed), (
                        f"qfi equivalence a={alpha} d={d} k={k} {scheme.value}"
                    )


def _check_scheme_ordering(g):
    for alpha in g["alphas"]:
        ga = analytic.hes_gain(alpha, Scheme.AADAG)
        g2 = analytic.hes_gain(alpha, Scheme.ADAG2)
        assert g2 > ga, f"gain ordering at alpha={alpha}"
        fa = analytic.hes_fidelity(alpha, ga, Scheme.AADAG)
        f2 = analytic.hes_fidelity(alpha, g2, Scheme.ADAG2)
        assert fa > f2, f"fidelity ordering at alpha={alpha}"
        assert analytic.hes_qfi(alpha, Scheme.AADAG) >= analytic.hes_qfi(alpha) - 1e-12
        assert analytic.hes_qfi(alpha, Scheme.ADAG2) >= analytic.hes_qfi(alpha) - 1e-12


def _check_normal_ordering(g):
    report = analytic.verify_normal_ordering_identities(24)
    for name, dev in report.items():
        assert dev <= 1e-9, f"normal ordering {name}: {dev}"


def _check_proposition_oracles(g):
    rng = np.random.default_rng(7)
    for d in g["dims"]:
        for k in range(d):
            alpha = float(rng.uniform(0.3, 1.8))
            word = tuple(rng.permutation(["add", "subtract"] * 2))
            x_h, x_c = amplify.prop1_pair(HesSpec(alpha, d, k), ((1.0, word),))
            assert abs(x_h - x_c) < 1e-10, f"balanced-word oracle d={d} k={k}"
            beta = float(rng.uniform(0.3, 1.8))
            imb = tuple(["add"] * 2 + ["subtract"])
            x_h, x_c = amplify.prop2_pair(alpha, beta, d, k, ((1.0, imb),))
            assert abs(x_h - x_c) < 1e-10, f"imbalanced-word oracle d={d} k={k}"


def _check_channel_agreement(g):
    for gamma in g["gammas"]:
        for d in (2, 3):
            for alpha in g["bell_alphas"]:
                for scheme in Scheme:
                    for spec in (ScsSpec(alpha, d, 0), HesSpec(alpha, d, d - 1)):
                        p_sim, p_kraus, fid = channel.compare_sim_vs_kraus(
                            spec, scheme, gamma, 30
                        )
                        assert abs(p_sim - p_kraus) <= 1e-8 * p_kraus, "herald probability"
                        assert fid >= 1.0 - 1e-10, "output state overlap"


def _check_hes_success_uniformity(g):
    for alpha in g["bell_alphas"]:
        for scheme in Scheme:
            probs = [
                channel.scheme_success_prob(
                    states.hes_state(HesSpec(alpha, 3, k), 30), scheme, 0.01
                )
                for k in range(3)
            ]
            assert max(probs) - min(probs) <= 1e-12, "hybrid success probability uniformity"


def _check_optimizer_gains(g):
    for alpha in g["bell_alphas"]:
        res = optimize.scs_gain(ScsSpec(alpha, 1, 0), Scheme.AADAG)
        assert abs(res.argmax - analytic.hes_gain(alpha, Scheme.AADAG)) < 1e-6
        res = optimize.scs_gain(ScsSpec(alpha, 1, 0), Scheme.ADAG2)
        assert abs(res.argmax - analytic.hes_gain(alpha, Scheme.ADAG2)) < 1e-6


def _check_quadrature_zero(g):
    lams = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
    for d in (2, 3, 4):
        for k in range(d):
            trunc = fock.auto_trunc(1.0)
            v = states.scs_state(ScsSpec(1.0, d, k), trunc)
            h = states.hes_state(HesSpec(1.0, d, k), trunc)
            for lam in lams:
                assert abs(fock.quadrature_expect(v, lam)) <= 1e-10
                assert abs(states.hybrid_quadrature_expect(h, lam)) <= 1e-10


CHECKS = (
    ("fock.ladder_algebra", _check_ladder_algebra),
    ("states.gram_identities", _check_gram_identities),
    ("states.pseudo_number_support", _check_pseudo_number),
    ("states.quadrature_zero", _check_quadrature_zero),
    ("amplify.proposition_oracles", _check_proposition_oracles),
    ("analytic.hes_fidelity_equivalence", _check_hes_fidelity_equivalence),
    ("analytic.scs_fidelity_equivalence", _check_scs_fidelity_equivalence),
    ("analytic.qfi_equivalence", _check_qfi_equivalence),
    ("analytic.scheme_ordering", _check_scheme_ordering),
    ("analytic.normal_ordering_identities", _check_normal_ordering),
    ("optimize.gain_closed_forms", _check_optimizer_gains),
    ("channel.sim_vs_kraus", _check_channel_agreement),
    ("channel.hes_success_uniformity", _check_hes_success_uniformity),
)


def check_suite(level: str, stream=None) -> int:
    """Run every invariant suite; returns 0 iff all pass."""
    stream = stream or sys.stdout
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    grids = _grids(level)
    failures = 0
    for name, fn in CHECKS:
        try:
            fn(grids)
        except AssertionError as exc:
            failures += 1
            print(f"FAIL {name}: {exc}", file=stream)
        else:
            print(f"PASS {name}", file=stream)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# command line


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _parse_k_list(text: str, d: int) -> tuple[int, ...]:
    text = text.strip()
    if text == "":
        return ()
    if text == "all":
        return tuple(range(d))
    return tuple(int(t) for t in text.split(","))


def _sweep_config(args, family: str) -> SweepConfig:
    file_cfg = _load_config(args.config) if args.config else {}

    def pick(flag, key, cast, default=None):
        if flag is not None:
            return flag
        if key in file_cfg:
            return cast(file_cfg[key])
        return default

    d = pick(args.d, "d", int, 2)
    k_text = args.k if args.k is not None else file_cfg.get("k", "all")
    return SweepConfig(
        family=family,
        d=d,
        k_list=_parse_k_list(str(k_text), d),
        scheme=pick(args.scheme, "scheme", str, "aadag"),
        alpha_min=pick(args.alpha_min, "alpha_min", float, 0.1),
        alpha_max=pick(args.alpha_max, "alpha_max", float, 3.0),
        steps=pick(args.steps, "steps", int, 30),
        gamma=pick(args.gamma, "gamma", float, None),
        trunc=pick(args.trunc, "trunc", int, None),
        out=pick(args.out, "out", str, None),
    )


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--d", type=int)
    p.add_argument("--k", help="comma-separated indices, or 'all'")
    p.add_argument("--scheme", choices=["aadag", "adag2"])
    p.add_argument("--alpha-min", dest="alpha_min", type=float)
    p.add_argument("--alpha-max", dest="alpha_max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--trunc", type=int)
    p.add_argument("--out", help="output CSV path (default stdout)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="catamp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("hes-sweep", "scs-sweep"):
        _add_sweep_flags(sub.add_parser(name))
    prob = sub.add_parser("prob-sweep")
    _add_sweep_flags(prob)
    prob.add_argument("--family", choices=["hes", "scs"], default="scs")
    crossing = sub.add_parser("crossing")
    crossing.add_argument("--lo", type=float, default=0.5)
    crossing.add_argument("--hi", type=float, default=1.2)
    check = sub.add_parser("check")
    check.add_argument("level", choices=["quick", "full"])
    args = parser.parse_args(argv)

    try:
        if args.command == "check":
            return check_suite(args.level)
        if args.command == "crossing":
            star = optimize.find_crossing(lambda a: analytic.qfi_ratio(a), 1.0, args.lo, args.hi)
            h = 1e-4

            def slope(a):
                return (analytic.qfi_ratio(a + h) - analytic.qfi_ratio(a - h)) / (2 * h)

            amin = optimize.find_crossing(slope, 0.0, 1.0, 2.0)
            print(f"ratio=1 at alpha={star:.6f}")
            print(f"ratio minimum at alpha={amin:.6f} value={analytic.qfi_ratio(amin):.6f}")
            return 0
        family = {"hes-sweep": "hes", "scs-sweep": "scs"}.get(args.command) or args.family
        cfg = _sweep_config(args, family)
        if args.command == "prob-sweep" and cfg.gamma is None:
            parser.error("prob-sweep requires --gamma (or gamma= in the config)")
        records = run_sweep(cfg)
        if cfg.out:
            emit_csv(records, cfg.out)
        else:
            sys.stdout.write(format_csv(records))
        return 0
    except (ValueError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (CatampError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
