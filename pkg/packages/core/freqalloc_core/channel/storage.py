import csv
import logging
import struct
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .models import ChannelTensor

logger = logging.getLogger(__name__)

CFR_MAGIC = b"CFR1"
_HEADER = struct.Struct("<4I")


def save_channels(channels: ChannelTensor, path: Path) -> Path:
    """Write ``channels`` as a CFR1 file: magic, u32 K L S N, interleaved re/im float64 row-major"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "wb") as f:
            f.write(CFR_MAGIC)
            f.write(_HEADER.pack(*channels.h.shape))
            f.write(channels.h.astype("<c16").tobytes(order="C"))
    except OSError as e:
        raise RuntimeError(f"Failed to write channel file {path}: {e}") from e
    logger.debug("Saved channel tensor %s to %s", channels.h.shape, path)
    return path


def load_channels(path: Path) -> ChannelTensor:
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != CFR_MAGIC:
        raise FormatError(f"{path} is not a CFR1 channel file (magic {data[:4]!r})")
    if len(data) < 4 + _HEADER.size:
        raise FormatError(f"{path} is truncated before the dimension header")

    shape = _HEADER.unpack_from(data, 4)
    payload = data[4 + _HEADER.size :]
    expected = int(np.prod(shape)) * 16
    if len(payload) != expected:
        raise FormatError(f"{path}: header says {shape} ({expected} bytes) but payload has {len(payload)} bytes")

    h = np.frombuffer(payload, dtype="<c16").reshape(shape)
    return ChannelTensor(h=h)


def link_gain_db(channels: ChannelTensor) -> np.ndarray:
    """Per-link per-subband power gain in dB, shape (K, L, S)"""
    power = np.sum(np.abs(channels.h) ** 2, axis=-1)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(power)


def write_gain_csv(
    channels: ChannelTensor,
    path: Path,
    frequencies_hz: np.ndarray | None = None,
    links: Iterable[tuple[int, int]] | None = None,
) -> Path:
    """
    Write per-link per-subband gain in dB

    Columns: ue_index, ap_index, subband, frequency_hz, gain_db. ``links``
    restricts output to the given (k, l) pairs; by default every link is written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    gain_db = link_gain_db(channels)
    if links is None:
        links = [(k, ap) for k in range(channels.num_ues) for ap in range(channels.num_aps)]

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["ue_index", "ap_index", "subband", "frequency_hz", "gain_db"])
        for k, ap in links:
            for s in range(channels.num_subbands):
                freq = "" if frequencies_hz is None else f"{frequencies_hz[s]:.1f}"
                writer.writerow([k, ap, s, freq, f"{gain_db[k, ap, s]:.6f}"])
    return path


def strongest_links(channels: ChannelTensor, ap: int, count: int = 10) -> list[tuple[int, int]]:
    """The ``count`` UEs with highest mean gain towards ``ap``, as (k, ap) pairs in UE order"""
    if not 0 <= ap < channels.num_aps:
        raise ValueError(f"AP index {ap} out of range [0, {channels.num_aps})")
    order = np.argsort(-channels.gain[:, ap], kind="stable")[:count]
    return [(int(k), ap) for k in sorted(order)]
