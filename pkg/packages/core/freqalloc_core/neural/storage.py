import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError
from .mlp import Mlp, OutputActivation

MLP_MAGIC = b"MLP1"
_U32 = struct.Struct("<I")
_OUTPUT_CODES = {OutputActivation.IDENTITY: 0, OutputActivation.SOFTMAX: 1}


def save_mlp(net: Mlp, path: Path) -> Path:
    """
    MLP1 layout: magic, u32 layer-size count, u32 sizes, u32 output kind
    (0 identity, 1 softmax), u32 softmax group size (0 if none), then every
    weight matrix (row-major) and bias vector as little-endian float64 in
    layer order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [len(net.sizes), *net.sizes, _OUTPUT_CODES[net.output], net.group_size or 0]
    with open(path, "wb") as f:
        f.write(MLP_MAGIC)
        f.write(struct.pack(f"<{len(header)}I", *header))
        for p in net.parameters():
            f.write(p.astype("<f8").tobytes(order="C"))
    return path


def load_mlp(path: Path) -> Mlp:
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != MLP_MAGIC:
        raise FormatError(f"{path} is not an MLP1 parameter file (magic {data[:4]!r})")
    try:
        (count,) = _U32.unpack_from(data, 4)
        offset = 8
        sizes = list(struct.unpack_from(f"<{count}I", data, offset))
        offset += 4 * count
        output_code, group_size = struct.unpack_from("<2I", data, offset)
        offset += 8
    except struct.error as e:
        raise FormatError(f"{path}: truncated header ({e})") from e

    codes = {v: k for k, v in _OUTPUT_CODES.items()}
    if output_code not in codes or count < 2:
        raise FormatError(f"{path}: bad header (layers={count}, output kind={output_code})")

    if (len(data) - offset) % 8:
        raise FormatError(f"{path}: parameter payload is not a whole number of float64 values")
    params = np.frombuffer(data, dtype="<f8", offset=offset)
    expected = sum(fo * fi + fo for fi, fo in zip(sizes[:-1], sizes[1:], strict=True))
    if params.size != expected:
        raise FormatError(f"{path}: expected {expected} parameters for sizes {sizes}, found {params.size}")

    weights, biases, cursor = [], [], 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:], strict=True):
        weights.append(params[cursor : cursor + fan_out * fan_in].reshape(fan_out, fan_in))
        cursor += fan_out * fan_in
        biases.append(params[cursor : cursor + fan_out])
        cursor += fan_out
    return Mlp.from_parameters(weights, biases, codes[output_code], group_size or None)
