"""Flat ``key = value`` stats files; nesting is expressed with dotted keys."""

from __future__ import annotations

from typing import Any


def flatten(data: dict, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # float() drops numpy scalar reprs such as np.float64(1.0)
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    text = str(value)
    if "\n" in text:
        raise ValueError("stats values must be single-line")
    return text


def dumps(data: dict) -> str:
    """Serialize nested dicts; key order is preserved."""
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in flatten(data).items())


def _parse(text: str) -> Any:
    if text in ("true", "false"):
        return text == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def loads(text: str) -> dict[str, Any]:
    """Parse into a flat dict keyed by dotted names; scalars are typed when possible."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        out[key.strip()] = _parse(value.strip())
    return out


def write(path, data: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(data))


def read(path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
