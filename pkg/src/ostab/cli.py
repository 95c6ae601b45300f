"""Command-line driver.

Every command writes a JSON envelope ``{"meta": ..., "records": [...]}``
(to stdout unless ``--out-json`` is given) and, with ``--out-csv``, a CSV
file whose column order is fixed per command.  Floats are written with 17
significant digits; non-finite values as the strings "inf", "-inf", "nan".
Outputs depend only on the configuration, so reruns are byte-identical;
wall-clock times go to a ``.log`` sidecar next to the JSON output.
"""
import argparse
from dataclasses import dataclass, field
import datetime
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__

COMMANDS = ("spectrum", "resolvent", "sweep", "neutral", "critical", "audit", "map", "psi-check")

CSV_COLUMNS = {
    "spectrum": ("re_lambda", "im_lambda", "residual"),
    "resolvent": ("alpha", "beta", "re_lambda", "im_lambda", "resolvent_norm",
                  "derivative_norm", "flag"),
    "sweep": ("alpha", "beta", "re_lambda", "im_lambda", "resolvent_norm", "derivative_norm",
              "flag"),
    "neutral": ("reynolds", "alpha_lower", "alpha_upper"),
    "critical": ("reynolds", "alpha", "re_c", "im_c", "re_lambda", "im_lambda", "residual"),
    "audit": ("case", "seed", "alpha", "beta", "re_lambda", "im_lambda", "p", "lhs",
              "rhs_scale", "ratio"),
    "map": ("alpha", "nu", "region", "scale", "norm", "ratio", "norm_shifted", "ratio_shifted"),
    "psi-check": ("beta", "re_lambda", "im_lambda", "check", "s", "lhs", "rhs_scale", "ratio"),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    profile: str = "poiseuille"
    params: dict = field(default_factory=dict)
    out_json: str = None
    out_csv: str = None
    svg: str = None
    workers: int = 1

    def config_hash(self):
        payload = {"command": self.command, "profile": self.profile, "params": self.params,
                   "version": __version__}
        text = json.dumps(_plain(payload), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# serialization

def fmt(x):
    """17-significant-digit text for a float."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


class _Float17:
    """Placeholder so the encoder writes a float with 17 digits."""

    def __init__(self, x):
        self.x = x


def _encode(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_encode(v, indent + 1)}' for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v) for v in obj) + "]"
        items = [pad + "  " + _encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, float):
        text = fmt(obj)
        return text if math.isfinite(obj) else json.dumps(text)
    return json.dumps(obj)


def dumps(obj):
    return _encode(_plain(obj)) + "\n"


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def write_csv(path, command, rows, config_hash):
    cols = CSV_COLUMNS[command]
    lines = [f"# ostab {__version__} config_hash={config_hash}", ",".join(cols)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in cols))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _scale(values, lo, hi, log):
    v = np.log10(values) if log else np.asarray(values, dtype=float)
    a, b = (math.log10(lo), math.log10(hi)) if log else (lo, hi)
    if b == a:
        b = a + 1
    return (v - a) / (b - a)


def write_svg(path, series, title, xlabel, ylabel, logx=False, logy=False, config_hash=""):
    """Minimal SVG line plot; ``series`` is a list of (label, xs, ys)."""
    width, height, margin = 640, 420, 60
    xs_all = np.concatenate([np.asarray(s[1], float) for s in series])
    ys_all = np.concatenate([np.asarray(s[2], float) for s in series])
    ok = np.isfinite(xs_all) & np.isfinite(ys_all)
    if logx:
        ok &= xs_all > 0
    if logy:
        ok &= ys_all > 0
    xlo, xhi = (xs_all[ok].min(), xs_all[ok].max()) if ok.any() else (0, 1)
    ylo, yhi = (ys_all[ok].min(), ys_all[ok].max()) if ok.any() else (0, 1)
    colors = ("#1f4e9c", "#b03a2e", "#1e8449", "#7d3c98")
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f"<!-- ostab {__version__} config_hash={config_hash} -->",
           f'<rect x="{margin}" y="{margin // 2}" width="{width - 1.5 * margin:g}" '
           f'height="{height - 1.5 * margin:g}" fill="none" stroke="black"/>',
           f'<text x="{width / 2:g}" y="20" text-anchor="middle">{title}</text>',
           f'<text x="{width / 2:g}" y="{height - 10}" text-anchor="middle">{xlabel}</text>',
           f'<text x="15" y="{height / 2:g}" transform="rotate(-90 15 {height / 2:g})" '
           f'text-anchor="middle">{ylabel}</text>',
           f'<text x="{margin}" y="{height - 30}" font-size="10">{fmt(xlo)}</text>',
           f'<text x="{width - margin // 2}" y="{height - 30}" font-size="10" '
           f'text-anchor="end">{fmt(xhi)}</text>',
           f'<text x="{margin - 5}" y="{height - margin}" font-size="10" '
           f'text-anchor="end">{fmt(ylo)}</text>',
           f'<text x="{margin - 5}" y="{margin // 2 + 10}" font-size="10" '
           f'text-anchor="end">{fmt(yhi)}</text>']
    pw, ph = width - 1.5 * margin, height - 1.5 * margin
    for k, (label, xs, ys) in enumerate(series):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        good = np.isfinite(xs) & np.isfinite(ys)
        if logx:
            good &= xs > 0
        if logy:
            good &= ys > 0
        if not good.any():
            continue
        px = margin + pw * _scale(xs[good], xlo, xhi, logx)
        py = margin / 2 + ph * (1 - _scale(ys[good], ylo, yhi, logy))
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = colors[k % len(colors)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - margin}" y="{margin + 15 * k}" font-size="11" '
                   f'fill="{color}" text-anchor="end">{label}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


# ---------------------------------------------------------------------------
# argument parsing

def parse_list(text):
    """Comma-separated floats, or ``start:stop:count`` for an inclusive linspace."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range {text!r} must be start:stop:count")
        a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
        if k < 1:
            raise ConfigError(f"range {text!r} needs a positive count")
        return [float(v) for v in np.linspace(a, b, k)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def _increasing(values, name):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name} ladder must be strictly increasing")
    return values


def read_config_file(path):
    """key=value lines (``#`` comments) turned into ``--key value`` flags."""
    flags = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "command":
            continue
        flags.append(f"--{key}={value}")
    return flags


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="ostab", description="Orr-Sommerfeld spectra, resolvents and audits")
    p.add_argument("--version", action="version", version=f"ostab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, beta=True):
        sp.add_argument("--config", help="key=value file mirroring the flags")
        sp.add_argument("--profile", default="poiseuille")
        sp.add_argument("--n", type=int, default=None, help="Chebyshev grid size (even)")
        sp.add_argument("--out-json")
        sp.add_argument("--out-csv")
        sp.add_argument("--svg")
        sp.add_argument("--workers", type=int, default=1)
        if beta:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--beta", help="beta value or list")
            g.add_argument("--reynolds", help="Reynolds number or list")

    sp = sub.add_parser("spectrum", help="leftmost Orr-Sommerfeld eigenvalues")
    common(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--count", type=int, default=10)

    sp = sub.add_parser("resolvent", help="resolvent norms along a line in lambda")
    common(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--im-lambda", required=True, help="list or start:stop:count")
    sp.add_argument("--re-lambda", type=float, default=0.0)

    sp = sub.add_parser("sweep", help="half-plane resolvent suprema over a beta ladder")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float)
    g.add_argument("--alpha-power", type=float, help="alpha = beta**power")
    sp.add_argument("--upsilon", type=float, default=0.0)
    sp.add_argument("--npts", type=int, default=200)

    sp = sub.add_parser("neutral", help="unstable alpha band per Reynolds number")
    common(sp, beta=False)
    sp.add_argument("--reynolds", required=True)
    sp.add_argument("--criterion", choices=("paper", "classical"), default="paper")

    sp = sub.add_parser("critical", help="critical Reynolds number")
    common(sp, beta=False)
    sp.add_argument("--criterion", choices=("paper", "classical"), default="classical")

    sp = sub.add_parser("audit", help="resolvent-estimate audits")
    common(sp)
    sp.add_argument("--case", required=True, help="case id(s), comma separated, or 'all'")
    sp.add_argument("--seeds", type=int, default=3)
    sp.add_argument("--no-refine", action="store_true")

    sp = sub.add_parser("map", help="measured resolvent norms over the region partition")
    common(sp)
    sp.add_argument("--alpha", required=True, help="list or start:stop:count")
    sp.add_argument("--nu", required=True, help="list or start:stop:count")
    sp.add_argument("--upsilon", type=float, default=0.0)

    sp = sub.add_parser("psi-check", help="Airy boundary-layer checks")
    common(sp, beta=False)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--im-lambda", type=float, default=0.3)
    sp.add_argument("--re-lambda", type=float, default=0.0)
    return p


def parse_args(argv):
    argv = list(argv)
    # splice config-file flags in front of the explicit ones so the latter win
    if argv and argv[0] in COMMANDS:
        for i, a in enumerate(argv):
            if a == "--config" and i + 1 < len(argv):
                argv = argv[:1] + read_config_file(argv[i + 1]) + argv[1:]
                break
            if a.startswith("--config="):
                argv = argv[:1] + read_config_file(a.split("=", 1)[1]) + argv[1:]
                break
    ns = build_parser().parse_args(argv)
    workers = ns.workers
    env = os.environ.get("OSTAB_WORKERS")
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise ConfigError(f"OSTAB_WORKERS must be an integer, got {env!r}") from None
    if workers < 1:
        raise ConfigError("worker count must be >= 1")
    params = {k: v for k, v in vars(ns).items()
              if k not in ("command", "profile", "out_json", "out_csv", "svg", "workers", "config")
              and v is not None}
    for path in (ns.out_json, ns.out_csv, ns.svg):
        if path:
            folder = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(folder) or not os.access(folder, os.W_OK):
                raise ConfigError(f"output path {path!r} is not writable")
    return RunConfig(ns.command, ns.profile, params, ns.out_json, ns.out_csv, ns.svg, workers)


# ---------------------------------------------------------------------------
# commands

def _betas(params, alpha=None):
    if params.get("beta") is not None:
        return parse_list(params["beta"])
    if params.get("reynolds") is not None:
        if alpha is None:
            raise ConfigError("--reynolds needs --alpha")
        return [alpha * r for r in parse_list(params["reynolds"])]
    raise ConfigError("one of --beta or --reynolds is required")


def _single_beta(params, alpha):
    vals = _betas(params, alpha)
    if len(vals) != 1:
        raise ConfigError("this command takes a single beta/reynolds value")
    return vals[0]


def _check_n(n):
    if n is not None and (n < 8 or n % 2):
        raise ConfigError(f"--n must be even and >= 8, got {n}")
    return n


def _record_row(rec):
    return {"alpha": rec.alpha, "beta": rec.beta, "re_lambda": rec.lam.real,
            "im_lambda": rec.lam.imag, "resolvent_norm": rec.resolvent_norm,
            "derivative_norm": rec.derivative_norm, "flag": rec.flag}


def cmd_spectrum(cfg):
    from .linalg import leftmost, spectrum
    from .sweeps import os_operator
    p = cfg.params
    alpha = p["alpha"]
    beta = _single_beta(p, alpha)
    n = _check_n(p.get("n")) or 128
    op = os_operator(cfg.profile, alpha, beta, n)
    spec = spectrum(op)
    lm = leftmost(op, spec=spec)
    vals = [(lam, res) for lam, res in zip(spec.eigenvalues, spec.residuals) if abs(lam) <= 1e4]
    rows = [{"re_lambda": lam.real, "im_lambda": lam.imag, "residual": res}
            for lam, res in vals[: p["count"]]]
    extra = {"leftmost": lm, "beta": beta, "unstable": lm.real < 0,
             "infinite_filtered": spec.infinite_filtered, "rejected": spec.rejected}
    return rows, extra, n


def cmd_resolvent(cfg):
    from .sweeps import n_for_beta, resolvent_line
    p = cfg.params
    alpha = p["alpha"]
    beta = _single_beta(p, alpha)
    n = _check_n(p.get("n")) or n_for_beta(beta)
    lams = [complex(p["re_lambda"], nu) for nu in parse_list(p["im_lambda"])]
    recs = resolvent_line(cfg.profile, alpha, beta, lams, n=n, workers=cfg.workers)
    rows = [_record_row(r) for r in recs]
    if cfg.svg:
        write_svg(cfg.svg, [("||B^-1||", [r.lam.imag for r in recs], [r.resolvent_norm for r in recs]),
                            ("||D B^-1||", [r.lam.imag for r in recs],
                             [r.derivative_norm for r in recs])],
                  f"resolvent norms, alpha={fmt(alpha)}, beta={fmt(beta)}", "Im lambda", "norm",
                  logy=True, config_hash=cfg.config_hash())
    return rows, {"beta": beta}, n


def cmd_sweep(cfg):
    from .sweeps import exponent_fit, n_for_beta, sup_resolvent
    p = cfg.params
    betas = _increasing(parse_list(p["beta"]) if p.get("beta") else [], "beta")
    if not betas:
        raise ConfigError("sweep needs --beta (a list)")
    rows, fits = [], []
    for beta in betas:
        alpha = p["alpha"] if p.get("alpha") is not None else beta ** p.get("alpha_power", 0.0)
        res = sup_resolvent(cfg.profile, alpha, beta, upsilon=p["upsilon"],
                            n=_check_n(p.get("n")) or n_for_beta(beta), npts=p["npts"])
        flag = "unstable" if res.unstable else "ok"
        rows.append({"alpha": alpha, "beta": beta, "re_lambda": res.mu_line,
                     "im_lambda": res.nu_star, "resolvent_norm": res.resolvent_norm,
                     "derivative_norm": res.derivative_norm, "flag": flag,
                     "sup": res.value, "leftmost": res.leftmost,
                     "interior_ratio": res.interior_ratio, "far_field": res.far_field, "n": res.n})
        if np.isfinite(res.value):
            fits.append((beta, res.value))
    extra = {}
    if len(fits) >= 3:
        extra["fit"] = exponent_fit(fits)
    if cfg.svg:
        write_svg(cfg.svg, [("sup", [r["beta"] for r in rows], [r["sup"] for r in rows])],
                  "half-plane resolvent supremum", "beta", "sup", logx=True, logy=True,
                  config_hash=cfg.config_hash())
    return rows, extra, None


def cmd_neutral(cfg):
    from .sweeps import neutral_curve
    p = cfg.params
    rs = _increasing(parse_list(p["reynolds"]), "reynolds")
    pts = neutral_curve(cfg.profile, rs, n=_check_n(p.get("n")), criterion=p["criterion"],
                        workers=cfg.workers)
    rows = [{"reynolds": q.reynolds, "alpha_lower": q.alpha_lower, "alpha_upper": q.alpha_upper}
            for q in pts]
    extra = {"has_band": [q.has_band for q in pts]}
    if cfg.svg:
        write_svg(cfg.svg, [("lower", rs, [q.alpha_lower for q in pts]),
                            ("upper", rs, [q.alpha_upper for q in pts])],
                  "neutral curve", "R", "alpha", logx=True, logy=True,
                  config_hash=cfg.config_hash())
    return rows, extra, p.get("n")


def cmd_critical(cfg):
    from .sweeps import critical_reynolds
    p = cfg.params
    n = _check_n(p.get("n")) or 128
    r = critical_reynolds(cfg.profile, n=n, criterion=p["criterion"])
    rows = [{"reynolds": r["R_c"], "alpha": r["alpha_c"], "re_c": r["c_c"].real,
             "im_c": r["c_c"].imag, "re_lambda": r["lam"].real, "im_lambda": r["lam"].imag,
             "residual": r["residual"]}]
    return rows, {"criterion": r["criterion"], "converged": r["converged"]}, n


def cmd_audit(cfg):
    from . import audits
    p = cfg.params
    ids = [c.strip() for c in p["case"].split(",") if c.strip()]
    if ids == ["all"]:
        ids = list(audits.INVISCID_CASES + audits.SCHRODINGER_CASES)
    betas = tuple(_increasing(parse_list(p["beta"]), "beta")) if p.get("beta") else audits.BETA_LADDER
    records = []
    for cid in ids:
        if cid not in audits.INVISCID_CASES + audits.SCHRODINGER_CASES:
            raise ConfigError(f"unknown audit case {cid!r}")
        cases = audits.default_cases(cid, cfg.profile, betas=betas)
        run = audits.audit_inviscid if cid in audits.INVISCID_CASES else audits.audit_schrodinger
        grid = None
        if p.get("n"):
            grid = audits.grid_for(_check_n(p["n"]))
        records.extend(run(cases, grid, cfg.profile, p["seeds"], refine=not p["no_refine"]))
    summary = audits.summarize(records)
    rows = [{"case": r.case, "seed": r.seed, "alpha": r.alpha, "beta": r.beta,
             "re_lambda": r.re_lambda, "im_lambda": r.im_lambda, "p": r.p, "lhs": r.lhs,
             "rhs_scale": r.rhs_scale, "ratio": r.ratio, "ladder": r.ladder, "group": r.group,
             "residual": r.residual, "n": r.n, "drift": r.drift} for r in records]
    extra = {"summary": {k: {"max_ratio": s.max_ratio, "slope": s.slope,
                             "max_residual": s.max_residual, "max_drift": s.max_drift,
                             "passed": s.passed, "reasons": s.reasons}
                         for k, s in summary.items()},
             "passed": all(s.passed for s in summary.values())}
    return rows, extra, p.get("n")


def cmd_map(cfg):
    from .sweeps import n_for_beta, region_map
    p = cfg.params
    beta = _single_beta(p, None) if p.get("beta") else None
    if beta is None:
        raise ConfigError("map needs --beta")
    n = _check_n(p.get("n")) or n_for_beta(beta)
    cells = region_map(cfg.profile, beta, parse_list(p["alpha"]), parse_list(p["nu"]), n=n,
                       upsilon=p["upsilon"])
    rows = [{"alpha": c.alpha, "nu": c.nu, "region": c.region, "scale": c.scale, "norm": c.norm,
             "ratio": c.ratio, "norm_shifted": c.norm_shifted, "ratio_shifted": c.ratio_shifted}
            for c in cells]
    return rows, {"beta": beta}, n


def cmd_psi_check(cfg):
    from . import airy
    p = cfg.params
    lam = complex(p["re_lambda"], p["im_lambda"])
    rows = []
    for beta in parse_list(p["beta"]):
        integral = airy.psi_tilde_integral(lam, beta)
        rows.append({"beta": beta, "re_lambda": lam.real, "im_lambda": lam.imag,
                     "check": "integral", "s": 0.0, "lhs": abs(beta ** (1 / 3) * integral - 1),
                     "rhs_scale": 1e-6, "ratio": abs(beta ** (1 / 3) * integral - 1) / 1e-6})
        for norm, s in (("endpoint", 0.0), ("l1", 0.0), ("l1", 1.0), ("sup", 1.0)):
            r = airy.bound_check_psi(lam, beta, s=s, norm=norm)
            rows.append({"beta": beta, "re_lambda": lam.real, "im_lambda": lam.imag,
                         "check": norm, "s": s, "lhs": r["lhs"], "rhs_scale": r["rhs_scale"],
                         "ratio": r["ratio"]})
    return rows, {"theta1r": airy.theta1r()}, None


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "resolvent": cmd_resolvent,
    "sweep": cmd_sweep,
    "neutral": cmd_neutral,
    "critical": cmd_critical,
    "audit": cmd_audit,
    "map": cmd_map,
    "psi-check": cmd_psi_check,
}


def run(cfg, stdout=None):
    """Execute a ``RunConfig``; returns the process exit status."""
    stdout = stdout or sys.stdout
    from .profiles import get_profile
    start = time.time()
    try:
        get_profile(cfg.profile)
        rows, extra, n = _DISPATCH[cfg.command](cfg)
    except (ConfigError, ValueError, KeyError) as exc:
        stdout.write(dumps({"error": {"type": type(exc).__name__, "message": str(exc),
                                      "command": cfg.command}}))
        return 2
    chash = cfg.config_hash()
    envelope = {
        "meta": {"version": __version__, "seed": 0, "grid_n": n, "profile": cfg.profile,
                 "command": cfg.command, "params": cfg.params, "config_hash": chash, **extra},
        "records": rows,
    }
    text = dumps(envelope)
    if cfg.out_json:
        with open(cfg.out_json, "w") as fh:
            fh.write(text)
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        with open(cfg.out_json + ".log", "a") as fh:
            fh.write(f"{stamp} {cfg.command} config_hash={chash} "
                     f"elapsed={time.time() - start:.3f}s\n")
    else:
        stdout.write(text)
    if cfg.out_csv:
        write_csv(cfg.out_csv, cfg.command, rows, chash)
    if cfg.command == "audit" and not extra["passed"]:
        return 1
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except ConfigError as exc:
        sys.stdout.write(dumps({"error": {"type": "ConfigError", "message": str(exc)}}))
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
