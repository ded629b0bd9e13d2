"""Run configuration: ``key = value`` files with ``#`` comments.

Numbers may be written as simple arithmetic in ``pi`` (``theta = pi/2``).
Command-line ``--set key=value`` overrides are applied after the file and
use the same syntax.  Unknown keys are rejected.

Keys (defaults in brackets):

    mode            spectrum | eigenvalues-vs-rabi | eigenvalues-vs-distance
                    | steady-vs-detuning | group-study          [spectrum]
    rabi            pi Rabi frequency Omega / gamma_pi          [10]
    detuning        Delta / gamma_pi                            [0]
    r12             interatomic distance / lambda_pi            [0.04]
    theta, phi      direction of r_2                            [pi/2, pi/4]
    p1 .. p5        group scale factors in [0, 1]               [1]
    spvc_eom        on | off                                    [on]
    include_p1 .. include_p4   spectrum terms on | off          [on]
    omega_min, omega_max, omega_count        spectrum grid      [-450, 450, 2001]
    rabi_min, rabi_max, rabi_count           Omega sweep        [0, 20, 81]
    r12_min, r12_max, r12_count              distance sweep     [0.02, 0.5, 97]
    detuning_min, detuning_max, detuning_count   Delta sweep    [-30, 30, 121]
    variants        group-study variants separated by ';'      [see below]
    workers         worker processes                            [1]
    out             output CSV path                             [none]

A group-study variant is a whitespace separated list of tokens applied on
top of the configured mask and term flags:

    all | none      set every group scale to 1 | 0
    G<a>            set group a to 1        G<a>=<p>  set group a to p
    no-spvc         switch off the intraatomic couplings in the equations of motion
    no-P<k>         drop spectrum term P<k>
"""

from __future__ import annotations

import ast
import dataclasses
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from .coupling import GROUPS, GroupMask
from .spectrum import TERMS, SpectrumTermFlags

MODES = (
    "spectrum",
    "eigenvalues-vs-rabi",
    "eigenvalues-vs-distance",
    "steady-vs-detuning",
    "group-study",
)

DEFAULT_VARIANTS = ("none G2", "none G3", "none G4", "all")


class ConfigError(ValueError):
    """Invalid configuration; carries the offending key and line number."""

    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class RunConfig:
    mode: str = "spectrum"
    rabi: float = 10.0
    detuning: float = 0.0
    r12: float = 0.04
    theta: float = math.pi / 2
    phi: float = math.pi / 4
    mask: GroupMask = field(default_factory=GroupMask)
    flags: SpectrumTermFlags = field(default_factory=SpectrumTermFlags)
    omega_grid: GridSpec = GridSpec(-450.0, 450.0, 2001)
    rabi_grid: GridSpec = GridSpec(0.0, 20.0, 81)
    r12_grid: GridSpec = GridSpec(0.02, 0.5, 97)
    detuning_grid: GridSpec = GridSpec(-30.0, 30.0, 121)
    variants: tuple = DEFAULT_VARIANTS
    workers: int = 1
    out: str | None = None


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_number(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_number(node.left), _eval_number(node.right))
    raise ValueError("not a number")


def parse_number(text: str) -> float:
    try:
        value = _eval_number(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
        raise ValueError(f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"number must be finite, got {text!r}")
    return value


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {text!r}")


def _parse_int(text):
    v = parse_number(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(v)


_FLOAT_KEYS = ("rabi", "detuning", "r12", "theta", "phi")
_GRIDS = ("omega", "rabi", "r12", "detuning")


def _known_keys():
    keys = {"mode", "spvc_eom", "variants", "workers", "out", *_FLOAT_KEYS}
    keys |= {f"p{a}" for a in range(1, len(GROUPS) + 1)}
    keys |= {f"include_p{k}" for k in range(1, len(TERMS) + 1)}
    keys |= {f"{g}_{part}" for g in _GRIDS for part in ("min", "max", "count")}
    return keys


KNOWN_KEYS = frozenset(_known_keys())


def _split_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = line.split("=", 1)
        yield key.strip(), value.strip(), lineno


def _apply(values: dict, key, value, line):
    if key not in KNOWN_KEYS:
        raise ConfigError("unknown key", key, line)
    try:
        if key == "mode":
            if value not in MODES:
                raise ValueError(f"mode must be one of {', '.join(MODES)}")
            parsed = value
        elif key in ("spvc_eom",) or key.startswith("include_p"):
            parsed = parse_bool(value)
        elif key == "variants":
            parsed = tuple(v.strip() for v in value.split(";") if v.strip())
            for v in parsed:
                parse_variant(v, GroupMask(), SpectrumTermFlags())
        elif key in ("workers",) or key.endswith("_count"):
            parsed = _parse_int(value)
        elif key == "out":
            parsed = value
        else:
            parsed = parse_number(value)
    except ValueError as exc:
        raise ConfigError(str(exc), key, line) from None
    values[key] = (parsed, line)


def _get(values, key, default):
    return values[key][0] if key in values else default


def _line(values, key):
    return values[key][1] if key in values else None


def _build(values: dict) -> RunConfig:
    base = RunConfig()

    def check(cond, key, message):
        if not cond:
            raise ConfigError(message, key, _line(values, key))

    scales = []
    for a in range(1, len(GROUPS) + 1):
        p = _get(values, f"p{a}", 1.0)
        check(0.0 <= p <= 1.0, f"p{a}", f"constraint p{a} in [0, 1] violated ({p})")
        scales.append(p)
    mask = GroupMask(tuple(scales), _get(values, "spvc_eom", True))
    flags = SpectrumTermFlags(
        tuple(_get(values, f"include_p{k}", True) for k in range(1, len(TERMS) + 1))
    )

    r12 = _get(values, "r12", base.r12)
    check(r12 > 0, "r12", f"constraint r12 > 0 violated ({r12})")
    rabi = _get(values, "rabi", base.rabi)
    check(rabi >= 0, "rabi", f"constraint rabi >= 0 violated ({rabi})")

    grids = {}
    for g in _GRIDS:
        default = getattr(base, f"{g}_grid")
        lo = _get(values, f"{g}_min", default.min)
        hi = _get(values, f"{g}_max", default.max)
        n = _get(values, f"{g}_count", default.count)
        check(n >= 2, f"{g}_count", f"constraint {g}_count >= 2 violated ({n})")
        check(lo < hi, f"{g}_max", f"constraint {g}_min < {g}_max violated ({lo} >= {hi})")
        grids[g] = GridSpec(lo, hi, n)
    check(grids["r12"].min > 0, "r12_min", "constraint r12_min > 0 violated")
    check(grids["rabi"].min >= 0, "rabi_min", "constraint rabi_min >= 0 violated")

    workers = _get(values, "workers", base.workers)
    check(workers >= 1, "workers", f"constraint workers >= 1 violated ({workers})")
    variants = _get(values, "variants", base.variants)
    check(len(variants) > 0, "variants", "at least one variant is required")

    return RunConfig(
        mode=_get(values, "mode", base.mode),
        rabi=rabi,
        detuning=_get(values, "detuning", base.detuning),
        r12=r12,
        theta=_get(values, "theta", base.theta),
        phi=_get(values, "phi", base.phi),
        mask=mask,
        flags=flags,
        omega_grid=grids["omega"],
        rabi_grid=grids["rabi"],
        r12_grid=grids["r12"],
        detuning_grid=grids["detuning"],
        variants=variants,
        workers=workers,
        out=_get(values, "out", base.out),
    )


def parse_config(text: str = "", overrides=()) -> RunConfig:
    """Parse config ``text`` and apply ``key=value`` ``overrides`` on top."""
    values = {}
    for key, value, line in _split_lines(text):
        _apply(values, key, value, line)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, value = item.split("=", 1)
        _apply(values, key.strip(), value.strip(), None)
    return _build(values)


def parse_variant(text: str, mask: GroupMask, flags: SpectrumTermFlags):
    """Apply group-study variant tokens to ``mask``/``flags``; returns the new pair."""
    scales = list(mask.scales)
    spvc = mask.spvc_eom
    include = list(flags.include)
    for token in text.split():
        if token == "all":
            scales = [1.0] * len(GROUPS)
        elif token == "none":
            scales = [0.0] * len(GROUPS)
        elif token == "no-spvc":
            spvc = False
        elif token.startswith("no-") and token[3:] in TERMS:
            include[TERMS.index(token[3:])] = False
        elif token.split("=")[0] in GROUPS:
            name, _, p = token.partition("=")
            value = parse_number(p) if p else 1.0
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"constraint {name} scale in [0, 1] violated ({value})")
            scales[GROUPS.index(name)] = value
        else:
            raise ValueError(f"unknown variant token {token!r}")
    return GroupMask(tuple(scales), spvc), dataclasses.replace(flags, include=tuple(include))
