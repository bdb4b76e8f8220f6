"""JSON scenario configurations.

A scenario fixes the order ``alpha``, a diagonal operator, the forcing of each
mode, the initial value, the time grid and (optionally) the classification
parameters. Real-valued fields accept either JSON numbers or short arithmetic
expressions such as ``"pi**(2/3)"``; the original text is kept so that
``dump(load(x))`` is stable.

Example::

    {
      "name": "relaxation",
      "alpha": 0.5,
      "operator": {"kind": "explicit", "eigenvalues": [-1.0]},
      "forcing": {"terms": [], "decay": null},
      "initial": [1.0],
      "grid": {"t_max": 5, "dt": 0.001}
    }
"""

from __future__ import annotations

import ast
import json
import math
import operator as _op
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from fracperiod.asymptotic_analysis import DEFAULT_FLOOR, DEFAULT_RATIO, DEFAULT_WINDOWS, ClassifyParams
from fracperiod.errors import ConfigError, FracPeriodError
from fracperiod.fractional_calculus import TimeGrid
from fracperiod.mild_solver import DecayTerm, ForcingSpec, ForcingTerm, ModeForcing
from fracperiod.operator_model import DiagonalOperator

BUNDLED_PACKAGE = "fracperiod.scenarios"

# {{{ numbers


class Num(float):
    """A float that remembers the expression it was parsed from."""

    expr: str | None

    def __new__(cls, value: float, expr: str | None = None) -> Num:
        obj = super().__new__(cls, value)
        obj.expr = expr
        return obj

    def to_json(self) -> float | str:
        return self.expr if self.expr is not None else float(self)


_BINOPS = {
    ast.Add: _op.add,
    ast.Sub: _op.sub,
    ast.Mult: _op.mul,
    ast.Div: _op.truediv,
    ast.Pow: _op.pow,
}
_UNARY = {ast.UAdd: _op.pos, ast.USub: _op.neg}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "exp": math.exp, "log": math.log}


def eval_expression(text: str) -> float:
    """Evaluate a real arithmetic expression over numbers, ``pi``, ``e`` and
    ``sqrt``/``exp``/``log``. Anything else raises :class:`ValueError`."""

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return float(_BINOPS[type(node.op)](ev(node.left), ev(node.right)))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return float(_UNARY[type(node.op)](ev(node.operand)))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return float(_FUNCS[node.func.id](ev(node.args[0])))
        raise ValueError(f"unsupported expression element {ast.dump(node)[:40]}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
        value = ev(tree)
    except (SyntaxError, ZeroDivisionError, OverflowError, TypeError) as exc:
        raise ValueError(str(exc)) from exc
    if isinstance(value, complex) or not math.isfinite(value):
        raise ValueError(f"expression {text!r} is not a finite real number")
    return value


def _real(raw: Any, path: str) -> Num:
    if isinstance(raw, bool):
        raise ConfigError(path, "expected a number, got a boolean")
    if isinstance(raw, (int, float)):
        if not math.isfinite(raw):
            raise ConfigError(path, "expected a finite number")
        return Num(float(raw))
    if isinstance(raw, str):
        try:
            return Num(eval_expression(raw), raw)
        except ValueError as exc:
            raise ConfigError(path, f"cannot evaluate {raw!r}: {exc}") from None
    raise ConfigError(path, f"expected a number or expression, got {type(raw).__name__}")


@dataclass(frozen=True)
class ComplexNum:
    re: Num
    im: Num

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def to_json(self) -> Any:
        if float(self.im) == 0.0 and self.im.expr is None:
            return self.re.to_json()
        return [self.re.to_json(), self.im.to_json()]


def _complex(raw: Any, path: str) -> ComplexNum:
    """A real number/expression, or a ``[re, im]`` pair."""
    if isinstance(raw, list):
        if len(raw) != 2:
            raise ConfigError(path, "complex values are written as [re, im]")
        return ComplexNum(_real(raw[0], f"{path}[0]"), _real(raw[1], f"{path}[1]"))
    return ComplexNum(_real(raw, path), Num(0.0))


def _int(raw: Any, path: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ConfigError(path, f"expected an integer, got {raw!r}")
    return raw


def _bool(raw: Any, path: str) -> bool:
    if not isinstance(raw, bool):
        raise ConfigError(path, f"expected true or false, got {raw!r}")
    return raw


def _obj(raw: Any, path: str, allowed: set[str]) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(path, f"expected an object, got {type(raw).__name__}")
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")
    return raw


def _req(d: dict, key: str, path: str) -> Any:
    if key not in d:
        raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
    return d[key]


# }}}

# {{{ sections


@dataclass(frozen=True)
class OperatorConfig:
    kind: str
    a: Num | None = None
    n_modes: int | None = None
    modes: tuple[int, ...] | None = None
    eigenvalues: tuple[ComplexNum, ...] | None = None

    @classmethod
    def parse(cls, raw: Any, path: str = "operator") -> OperatorConfig:
        d = _obj(raw, path, {"kind", "a", "n_modes", "modes", "eigenvalues"})
        kind = _req(d, "kind", path)
        if kind == "dirichlet_laplacian":
            a = _real(_req(d, "a", path), f"{path}.a")
            if not a > 0.0:
                raise ConfigError(f"{path}.a", f"diffusivity must be positive: got {float(a)}")
            if "eigenvalues" in d:
                raise ConfigError(f"{path}.eigenvalues", "not allowed for dirichlet_laplacian")
            modes = None
            n_modes = None
            if "modes" in d:
                raw_modes = d["modes"]
                if not isinstance(raw_modes, list):
                    raise ConfigError(f"{path}.modes", "expected a list of mode numbers")
                modes = tuple(_int(m, f"{path}.modes[{i}]") for i, m in enumerate(raw_modes))
                if len(modes) < 1:
                    raise ConfigError(f"{path}.modes", "at least one mode is required (N >= 1)")
                for i, m in enumerate(modes):
                    if m < 1:
                        raise ConfigError(f"{path}.modes[{i}]", "Dirichlet modes start at 1")
                if len(set(modes)) != len(modes):
                    raise ConfigError(f"{path}.modes", "mode numbers must be distinct")
            if "n_modes" in d:
                n_modes = _int(d["n_modes"], f"{path}.n_modes")
                if n_modes < 1:
                    raise ConfigError(f"{path}.n_modes", f"N must be at least 1: got {n_modes}")
                if modes is not None and len(modes) != n_modes:
                    raise ConfigError(f"{path}.n_modes", "does not match the length of modes")
            if modes is None and n_modes is None:
                raise ConfigError(f"{path}.n_modes", "missing required field")
            return cls(kind, a=a, n_modes=n_modes, modes=modes)
        if kind == "explicit":
            for key in ("a", "n_modes", "modes"):
                if key in d:
                    raise ConfigError(f"{path}.{key}", "not allowed for explicit operators")
            raw_eigs = _req(d, "eigenvalues", path)
            if not isinstance(raw_eigs, list):
                raise ConfigError(f"{path}.eigenvalues", "expected a list")
            if len(raw_eigs) < 1:
                raise ConfigError(f"{path}.eigenvalues", "at least one mode is required (N >= 1)")
            eigs = tuple(
                _complex(v, f"{path}.eigenvalues[{i}]") for i, v in enumerate(raw_eigs)
            )
            return cls(kind, eigenvalues=eigs)
        raise ConfigError(
            f"{path}.kind", f"expected 'dirichlet_laplacian' or 'explicit', got {kind!r}"
        )

    @property
    def size(self) -> int:
        if self.eigenvalues is not None:
            return len(self.eigenvalues)
        if self.modes is not None:
            return len(self.modes)
        return int(self.n_modes)

    def build(self) -> DiagonalOperator:
        if self.kind == "explicit":
            return DiagonalOperator.explicit(e.value for e in self.eigenvalues)
        if self.modes is not None:
            return DiagonalOperator.dirichlet_laplacian(float(self.a), modes=self.modes)
        return DiagonalOperator.dirichlet_laplacian(float(self.a), self.n_modes)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.kind == "explicit":
            out["eigenvalues"] = [e.to_json() for e in self.eigenvalues]
        else:
            out["a"] = self.a.to_json()
            if self.n_modes is not None:
                out["n_modes"] = self.n_modes
            if self.modes is not None:
                out["modes"] = list(self.modes)
        return out


@dataclass(frozen=True)
class TermConfig:
    omega: Num
    amplitude_re: Num
    amplitude_im: Num

    @classmethod
    def parse(cls, raw: Any, path: str) -> TermConfig:
        d = _obj(raw, path, {"omega", "amplitude_re", "amplitude_im"})
        return cls(
            _real(_req(d, "omega", path), f"{path}.omega"),
            _real(d.get("amplitude_re", 0.0), f"{path}.amplitude_re"),
            _real(d.get("amplitude_im", 0.0), f"{path}.amplitude_im"),
        )

    def to_json(self) -> dict:
        return {
            "omega": self.omega.to_json(),
            "amplitude_re": self.amplitude_re.to_json(),
            "amplitude_im": self.amplitude_im.to_json(),
        }


@dataclass(frozen=True)
class ModeForcingConfig:
    """Forcing of one mode: ``sum amplitude e^(i omega t) + d e^(-gamma t)``."""

    terms: tuple[TermConfig, ...] = ()
    decay: tuple[Num, Num] | None = None

    @classmethod
    def parse(cls, raw: Any, path: str) -> ModeForcingConfig:
        d = _obj(raw, path, {"terms", "decay"})
        raw_terms = d.get("terms", [])
        if not isinstance(raw_terms, list):
            raise ConfigError(f"{path}.terms", "expected a list")
        terms = tuple(TermConfig.parse(t, f"{path}.terms[{i}]") for i, t in enumerate(raw_terms))
        decay = None
        if d.get("decay") is not None:
            dd = _obj(d["decay"], f"{path}.decay", {"d", "gamma"})
            amp = _real(_req(dd, "d", f"{path}.decay"), f"{path}.decay.d")
            rate = _real(_req(dd, "gamma", f"{path}.decay"), f"{path}.decay.gamma")
            if not rate > 0.0:
                raise ConfigError(f"{path}.decay.gamma", f"decay rate must be positive: got {float(rate)}")
            decay = (amp, rate)
        return cls(terms, decay)

    def build(self) -> ModeForcing:
        terms = tuple(
            ForcingTerm(float(t.omega), complex(t.amplitude_re, t.amplitude_im)) for t in self.terms
        )
        decay = None if self.decay is None else DecayTerm(float(self.decay[0]), float(self.decay[1]))
        return ModeForcing(terms, decay)

    def to_json(self) -> dict:
        decay = None
        if self.decay is not None:
            decay = {"d": self.decay[0].to_json(), "gamma": self.decay[1].to_json()}
        return {"terms": [t.to_json() for t in self.terms], "decay": decay}


@dataclass(frozen=True)
class GridConfig:
    t_max: Num
    dt: Num

    @classmethod
    def parse(cls, raw: Any, path: str = "grid") -> GridConfig:
        d = _obj(raw, path, {"t_max", "dt"})
        t_max = _real(_req(d, "t_max", path), f"{path}.t_max")
        dt = _real(_req(d, "dt", path), f"{path}.dt")
        if not dt > 0.0:
            raise ConfigError(f"{path}.dt", f"must be positive: got {float(dt)}")
        if not t_max >= dt:
            raise ConfigError(f"{path}.t_max", f"must be at least dt: got {float(t_max)}")
        return cls(t_max, dt)

    def build(self) -> TimeGrid:
        return TimeGrid.covering(float(self.t_max), float(self.dt))

    def to_json(self) -> dict:
        return {"t_max": self.t_max.to_json(), "dt": self.dt.to_json()}


@dataclass(frozen=True)
class ClassifyConfig:
    windows: tuple[Num, ...] = tuple(Num(w) for w in DEFAULT_WINDOWS)
    ratio: Num = Num(DEFAULT_RATIO)
    floor: Num = Num(DEFAULT_FLOOR)
    include_conjugates: bool = True
    bloch_p: Num = Num(0.0)

    @classmethod
    def parse(cls, raw: Any, path: str = "classify") -> ClassifyConfig:
        d = _obj(raw, path, {"windows", "ratio", "floor", "include_conjugates", "bloch_p"})
        kw: dict[str, Any] = {}
        if "windows" in d:
            raw_w = d["windows"]
            if not isinstance(raw_w, list) or len(raw_w) < 3:
                raise ConfigError(f"{path}.windows", "expected a list of at least three window starts")
            windows = tuple(_real(w, f"{path}.windows[{i}]") for i, w in enumerate(raw_w))
            for i in range(1, len(windows)):
                if not windows[i] > windows[i - 1]:
                    raise ConfigError(f"{path}.windows[{i}]", "windows must be strictly increasing")
            if windows[0] < 0.0:
                raise ConfigError(f"{path}.windows[0]", "windows must start at t >= 0")
            kw["windows"] = windows
        if "ratio" in d:
            ratio = _real(d["ratio"], f"{path}.ratio")
            if not 0.0 < ratio < 1.0:
                raise ConfigError(f"{path}.ratio", f"must lie in (0, 1): got {float(ratio)}")
            kw["ratio"] = ratio
        if "floor" in d:
            floor = _real(d["floor"], f"{path}.floor")
            if not floor > 0.0:
                raise ConfigError(f"{path}.floor", f"must be positive: got {float(floor)}")
            kw["floor"] = floor
        if "include_conjugates" in d:
            kw["include_conjugates"] = _bool(d["include_conjugates"], f"{path}.include_conjugates")
        if "bloch_p" in d:
            p = _real(d["bloch_p"], f"{path}.bloch_p")
            if not 0.0 <= p < 2.0 * math.pi:
                raise ConfigError(f"{path}.bloch_p", "must lie in [0, 2 pi)")
            kw["bloch_p"] = p
        return cls(**kw)

    def params(self) -> ClassifyParams:
        return ClassifyParams(
            windows=tuple(float(w) for w in self.windows),
            ratio=float(self.ratio),
            floor=float(self.floor),
            include_conjugates=self.include_conjugates,
        )

    def to_json(self) -> dict:
        return {
            "windows": [w.to_json() for w in self.windows],
            "ratio": self.ratio.to_json(),
            "floor": self.floor.to_json(),
            "include_conjugates": self.include_conjugates,
            "bloch_p": self.bloch_p.to_json(),
        }


# }}}


@dataclass(frozen=True)
class ScenarioConfig:
    alpha: Num
    operator: OperatorConfig
    #: one entry per mode, or a single entry shared by every mode
    forcing: tuple[ModeForcingConfig, ...] | ModeForcingConfig
    initial: tuple[ComplexNum, ...]
    grid: GridConfig
    classify: ClassifyConfig | None = None
    name: str = ""
    description: str = ""

    @classmethod
    def from_dict(cls, raw: Any) -> ScenarioConfig:
        d = _obj(
            raw,
            "",
            {"name", "description", "alpha", "operator", "forcing", "initial", "grid", "classify"},
        )
        name = d.get("name", "")
        description = d.get("description", "")
        if not isinstance(name, str):
            raise ConfigError("name", "expected a string")
        if not isinstance(description, str):
            raise ConfigError("description", "expected a string")

        alpha = _real(_req(d, "alpha", ""), "alpha")
        if not 0.0 < alpha <= 1.0:
            raise ConfigError("alpha", f"fractional order must lie in (0, 1]: got {float(alpha)}")

        op = OperatorConfig.parse(_req(d, "operator", ""))
        n = op.size

        raw_f = d.get("forcing", {"terms": [], "decay": None})
        if isinstance(raw_f, list):
            if len(raw_f) != n:
                raise ConfigError("forcing", f"expected {n} per-mode entries, got {len(raw_f)}")
            forcing: Any = tuple(
                ModeForcingConfig.parse(f, f"forcing[{i}]") for i, f in enumerate(raw_f)
            )
        else:
            forcing = ModeForcingConfig.parse(raw_f, "forcing")

        raw_x0 = d.get("initial", [0.0] * n)
        if not isinstance(raw_x0, list):
            raise ConfigError("initial", "expected a list with one value per mode")
        if len(raw_x0) != n:
            raise ConfigError("initial", f"expected {n} values, got {len(raw_x0)}")
        initial = tuple(_complex(v, f"initial[{i}]") for i, v in enumerate(raw_x0))

        grid = GridConfig.parse(_req(d, "grid", ""))
        classify = None
        if d.get("classify") is not None:
            classify = ClassifyConfig.parse(d["classify"])
            _check_classifiable(grid, classify)

        return cls(alpha, op, forcing, initial, grid, classify, name, description)

    @classmethod
    def load(cls, source: str | Path) -> ScenarioConfig:
        path = resolve_config(source)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(str(source), f"cannot read file: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(str(source), f"invalid JSON: {exc}") from None
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        if isinstance(self.forcing, ModeForcingConfig):
            forcing: Any = self.forcing.to_json()
        else:
            forcing = [f.to_json() for f in self.forcing]
        out: dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        if self.description:
            out["description"] = self.description
        out.update(
            alpha=self.alpha.to_json(),
            operator=self.operator.to_json(),
            forcing=forcing,
            initial=[x.to_json() for x in self.initial],
            grid=self.grid.to_json(),
        )
        if self.classify is not None:
            out["classify"] = self.classify.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    # builders

    def build_operator(self) -> DiagonalOperator:
        try:
            return self.operator.build()
        except FracPeriodError as exc:
            raise ConfigError("operator", str(exc)) from None

    def build_forcing(self) -> ForcingSpec:
        if isinstance(self.forcing, ModeForcingConfig):
            return ForcingSpec.uniform(self.operator.size, *_unpack(self.forcing.build()))
        return ForcingSpec(tuple(f.build() for f in self.forcing))

    def build_initial(self) -> list[complex]:
        return [x.value for x in self.initial]

    def build_grid(self) -> TimeGrid:
        return self.grid.build()

    def require_classify(self) -> ClassifyConfig:
        """Classification section, or the defaults checked against the grid."""
        c = self.classify if self.classify is not None else ClassifyConfig()
        _check_classifiable(self.grid, c)
        return c


def _unpack(mode: ModeForcing) -> tuple:
    return mode.terms, mode.decay


def _check_classifiable(grid: GridConfig, classify: ClassifyConfig) -> None:
    dt = float(grid.dt)
    k = round(1.0 / dt)
    if k < 1 or abs(k * dt - 1.0) > 1.0e-12:
        raise ConfigError("grid.dt", f"1/dt must be an integer for classification: got dt = {dt!r}")
    need = float(classify.windows[-1]) + 2.0
    if float(grid.t_max) < need - 1.0e-9:
        raise ConfigError(
            "grid.t_max", f"must be at least max(windows) + 2 = {need:g}: got {float(grid.t_max):g}"
        )


def bundled_scenarios() -> list[str]:
    root = resources.files(BUNDLED_PACKAGE)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_config(source: str | Path) -> Path:
    """A filesystem path, or the name of a bundled scenario (with or without ``.json``)."""
    path = Path(source)
    if path.exists():
        return path
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    if str(source) in (name, name + ".json") and name in bundled_scenarios():
        return Path(str(resources.files(BUNDLED_PACKAGE) / f"{name}.json"))
    raise ConfigError(str(source), "no such file or bundled scenario")
