"""JSON + base64 fixture format for wavefunctions and physical states.

Amplitudes are stored as base64 of the raw little-endian complex pairs
(float64 real, float64 imaginary, C order over the tensor axes).  Everything
else is plain JSON:

    {
      "format": "qrf-wavefunction-v1",
      "subsystems": [{"label": "B", "n": 128, "length": 20.0}, ...],
      "representation": ["momentum", "momentum"],
      "frame": "A" | null,
      "shape": [128, 128],
      "amplitudes": "<base64>"
    }

Physical states wrap a wavefunction under ``"format": "qrf-physical-state-v1"``
with the frame letter alongside.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .classical import FrameLabel
from .grids import Grid1D, WaveFunction
from .physical import PhysicalState

WAVEFUNCTION_FORMAT = "qrf-wavefunction-v1"
PHYSICAL_STATE_FORMAT = "qrf-physical-state-v1"


def _encode_amplitudes(arr: np.ndarray) -> str:
    data = np.ascontiguousarray(arr).astype("<c16").tobytes()
    return base64.b64encode(data).decode("ascii")


def _decode_amplitudes(text: str, shape) -> np.ndarray:
    data = base64.b64decode(text.encode("ascii"))
    return np.frombuffer(data, dtype="<c16").reshape(tuple(shape)).astype(complex)


def wavefunction_to_dict(psi: WaveFunction) -> dict:
    return {
        "format": WAVEFUNCTION_FORMAT,
        "subsystems": [
            {"label": label, "n": grid.n, "length": grid.length}
            for label, grid in psi.subsystems
        ],
        "representation": list(psi.representation),
        "frame": psi.frame.name if psi.frame is not None else None,
        "shape": list(psi.amplitudes.shape),
        "amplitudes": _encode_amplitudes(psi.amplitudes),
    }


def wavefunction_from_dict(payload: dict) -> WaveFunction:
    if payload.get("format") != WAVEFUNCTION_FORMAT:
        raise ValueError(f"unexpected format tag {payload.get('format')!r}")
    subsystems = [
        (entry["label"], Grid1D(entry["n"], entry["length"]))
        for entry in payload["subsystems"]
    ]
    amplitudes = _decode_amplitudes(payload["amplitudes"], payload["shape"])
    frame = FrameLabel.from_name(payload["frame"]) if payload.get("frame") else None
    return WaveFunction(subsystems, amplitudes, tuple(payload["representation"]), frame=frame)


def physical_state_to_dict(state: PhysicalState) -> dict:
    return {
        "format": PHYSICAL_STATE_FORMAT,
        "frame": state.frame.name,
        "wavefunction": wavefunction_to_dict(state.canonical),
    }


def physical_state_from_dict(payload: dict) -> PhysicalState:
    if payload.get("format") != PHYSICAL_STATE_FORMAT:
        raise ValueError(f"unexpected format tag {payload.get('format')!r}")
    psi = wavefunction_from_dict(payload["wavefunction"])
    return PhysicalState(psi, FrameLabel.from_name(payload["frame"]))


def dump_wavefunction(psi: WaveFunction, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(wavefunction_to_dict(psi), handle)


def load_wavefunction(path) -> WaveFunction:
    with open(path, "r", encoding="utf-8") as handle:
        return wavefunction_from_dict(json.load(handle))


def dump_physical_state(state: PhysicalState, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(physical_state_to_dict(state), handle)


def load_physical_state(path) -> PhysicalState:
    with open(path, "r", encoding="utf-8") as handle:
        return physical_state_from_dict(json.load(handle))
