"""Dense ReLU networks with exact reverse-mode gradients.

This is the numerical core everything else is built on: plain
feedforward networks

    q(x) = W_L a_{L-1} + b_L,   a_l = relu(W_l a_{l-1} + b_l),  a_0 = x,

stored as float64 numpy arrays.  Gradients are computed by hand-rolled
backpropagation, not by a framework, so they are exact (up to float
rounding) and bit-reproducible.  The relu subgradient at 0 is taken to
be 0.

A network class in the sense used by the approximation-rate calculators
is described by ``NetworkClassSpec``: input/output dimensions, depth,
a width cap, and optional budgets on the number of nonzero entries, the
largest weight magnitude, and the output magnitude.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import BinaryIO, Optional, Sequence

import numpy as np

from . import _binfmt

_MAGIC = b"MOLB1"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class NetworkClassSpec:
    """Shape and budget constraints for one dense ReLU network.

    ``depth`` counts affine layers, so a network of depth L has L-1
    hidden activations.  ``None`` means unbounded for the three budget
    fields.  ``width`` caps every hidden width; ``max_nonzero`` caps the
    total number of nonzero weight and bias entries; ``weight_bound``
    caps every single weight/bias magnitude; ``output_bound`` caps the
    network output magnitude on its intended domain.
    """

    in_dim: int
    out_dim: int
    depth: int
    width: int
    max_nonzero: Optional[int] = None
    weight_bound: Optional[float] = None
    output_bound: Optional[float] = None

    def __post_init__(self) -> None:
        if self.in_dim < 1 or self.out_dim < 1:
            raise ValueError("in_dim and out_dim must be positive")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.width < 1:
            raise ValueError("width must be positive")
        if self.max_nonzero is not None and self.max_nonzero < 0:
            raise ValueError("max_nonzero must be nonnegative")
        if self.weight_bound is not None and self.weight_bound <= 0:
            raise ValueError("weight_bound must be positive")
        if self.output_bound is not None and self.output_bound <= 0:
            raise ValueError("output_bound must be positive")


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MlpParameters:
    """Weights and biases of one network, immutable once constructed.

    ``weights[l]`` has shape (rows, cols) mapping activations of width
    ``cols`` to width ``rows``; ``biases[l]`` has shape (rows,).
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases):
            raise ValueError("weights and biases must have one entry per layer")
        if not self.weights:
            raise ValueError("network needs at least one layer")
        prev_rows = None
        frozen_w = []
        frozen_b = []
        for idx, (w, b) in enumerate(zip(self.weights, self.biases)):
            w = np.asarray(w, dtype=np.float64)
            b = np.asarray(b, dtype=np.float64)
            if w.ndim != 2 or b.ndim != 1:
                raise ValueError(f"layer {idx}: weights must be 2-d and biases 1-d")
            if w.shape[0] != b.shape[0]:
                raise ValueError(f"layer {idx}: bias length {b.shape[0]} != rows {w.shape[0]}")
            if prev_rows is not None and w.shape[1] != prev_rows:
                raise ValueError(
                    f"layer {idx}: expects input width {w.shape[1]}, previous layer emits {prev_rows}"
                )
            prev_rows = w.shape[0]
            frozen_w.append(_freeze(w))
            frozen_b.append(_freeze(b))
        object.__setattr__(self, "weights", tuple(frozen_w))
        object.__setattr__(self, "biases", tuple(frozen_b))

    @property
    def depth(self) -> int:
        return len(self.weights)

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def hidden_widths(self) -> tuple[int, ...]:
        return tuple(w.shape[0] for w in self.weights[:-1])

    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))


@dataclass(frozen=True)
class GradientSet:
    """Per-layer gradients, shape-congruent with some MlpParameters."""

    d_weights: tuple[np.ndarray, ...]
    d_biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.d_weights) != len(self.d_biases):
            raise ValueError("d_weights and d_biases must have one entry per layer")
        object.__setattr__(self, "d_weights", tuple(_freeze(g) for g in self.d_weights))
        object.__setattr__(self, "d_biases", tuple(_freeze(g) for g in self.d_biases))


def init_network(
    spec: NetworkClassSpec, hidden_widths: Sequence[int], seed: int
) -> MlpParameters:
    """He-initialized parameters: W ~ N(0, 2/fan_in), biases zero.

    ``hidden_widths`` must list the depth-1 hidden layer widths, each no
    wider than the class width cap.  The draw order is fixed (layer by
    layer), so the result is fully determined by the seed.
    """
    widths = [int(w) for w in hidden_widths]
    if len(widths) != spec.depth - 1:
        raise ValueError(
            f"expected {spec.depth - 1} hidden widths for depth {spec.depth}, got {len(widths)}"
        )
    for w in widths:
        if w < 1:
            raise ValueError("hidden widths must be positive")
        if w > spec.width:
            raise ValueError(f"hidden width {w} exceeds class width cap {spec.width}")
    rng = np.random.default_rng(seed)
    dims = [spec.in_dim] + widths + [spec.out_dim]
    weights = []
    biases = []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        std = np.sqrt(2.0 / fan_in)
        weights.append(rng.normal(0.0, std, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpParameters(weights=tuple(weights), biases=tuple(biases))


def _as_batch(x: np.ndarray, in_dim: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        if arr.shape[0] != in_dim:
            raise ValueError(f"input has length {arr.shape[0]}, network expects {in_dim}")
        return arr[None, :], True
    if arr.ndim == 2:
        if arr.shape[1] != in_dim:
            raise ValueError(f"input has width {arr.shape[1]}, network expects {in_dim}")
        return arr, False
    raise ValueError("input must be a vector or a (batch, in_dim) matrix")


def forward(params: MlpParameters, x: np.ndarray) -> np.ndarray:
    """Evaluate the network; accepts one input vector or a batch matrix."""
    batch, squeeze = _as_batch(x, params.in_dim)
    a = batch
    last = params.depth - 1
    for idx, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ w.T + b
        a = z if idx == last else np.maximum(z, 0.0)
    return a[0] if squeeze else a


def forward_with_cache(
    params: MlpParameters, x: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Batched forward pass that keeps the activations backward needs.

    Returns (output (B, out_dim), activations [a_0 .. a_{L-1}]) where
    a_l is the input to affine layer l.
    """
    batch, _ = _as_batch(x, params.in_dim)
    acts = [batch]
    a = batch
    last = params.depth - 1
    for idx, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ w.T + b
        if idx == last:
            return z, acts
        a = np.maximum(z, 0.0)
        acts.append(a)
    raise AssertionError("unreachable")


def backward_batch(
    params: MlpParameters,
    acts: list[np.ndarray],
    upstream: np.ndarray,
) -> tuple[list[np.ndarray], list[np.ndarray], np.ndarray]:
    """Backpropagate a batch of upstream vectors through cached activations.

    Returns (d_weights, d_biases, input_grads); weight/bias gradients are
    summed over the batch, input_grads keeps one row per batch element.
    The relu mask is recovered from the cached post-activation values
    (positive iff the pre-activation was positive; relu'(0) = 0).
    """
    delta = np.asarray(upstream, dtype=np.float64)
    if delta.ndim == 1:
        delta = delta[None, :]
    if delta.shape != (acts[0].shape[0], params.out_dim):
        raise ValueError(
            f"upstream has shape {delta.shape}, expected {(acts[0].shape[0], params.out_dim)}"
        )
    n_layers = params.depth
    d_weights: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    d_biases: list[np.ndarray] = [None] * n_layers  # type: ignore[list-item]
    for idx in range(n_layers - 1, -1, -1):
        a_in = acts[idx]
        d_weights[idx] = delta.T @ a_in
        d_biases[idx] = delta.sum(axis=0)
        delta = delta @ params.weights[idx]
        if idx > 0:
            # a_in > 0 exactly where the pre-activation was > 0
            delta = delta * (a_in > 0.0)
    return d_weights, d_biases, delta


def backward(
    params: MlpParameters, x: np.ndarray, upstream: np.ndarray
) -> tuple[GradientSet, np.ndarray]:
    """Gradient of <upstream, q(x)> with respect to every parameter and x."""
    batch, squeeze = _as_batch(x, params.in_dim)
    _, acts = forward_with_cache(params, batch)
    up = np.asarray(upstream, dtype=np.float64)
    if up.ndim == 1 and not squeeze:
        raise ValueError("batched input needs a batched upstream")
    d_w, d_b, d_x = backward_batch(params, acts, up)
    grads = GradientSet(d_weights=tuple(d_w), d_biases=tuple(d_b))
    return grads, (d_x[0] if squeeze else d_x)


def check_class_membership(
    params: MlpParameters,
    spec: NetworkClassSpec,
    probe_inputs: Optional[np.ndarray] = None,
) -> list[str]:
    """List every violated class constraint (empty list means a member).

    Width, depth, and dimension constraints are structural; the nonzero
    and magnitude budgets are checked exactly.  The output bound can only
    be probed, so it is checked at ``probe_inputs`` when given.
    """
    violations: list[str] = []
    if params.in_dim != spec.in_dim:
        violations.append(f"input dim {params.in_dim} != {spec.in_dim}")
    if params.out_dim != spec.out_dim:
        violations.append(f"output dim {params.out_dim} != {spec.out_dim}")
    if params.depth != spec.depth:
        violations.append(f"depth {params.depth} != {spec.depth}")
    for idx, w in enumerate(params.hidden_widths):
        if w > spec.width:
            violations.append(f"hidden layer {idx} width {w} exceeds cap {spec.width}")
    if spec.weight_bound is not None:
        for idx, (w, b) in enumerate(zip(params.weights, params.biases)):
            w_max = float(np.max(np.abs(w))) if w.size else 0.0
            b_max = float(np.max(np.abs(b))) if b.size else 0.0
            if w_max > spec.weight_bound:
                violations.append(
                    f"layer {idx} weight magnitude {w_max:.6g} exceeds bound {spec.weight_bound:.6g}"
                )
            if b_max > spec.weight_bound:
                violations.append(
                    f"layer {idx} bias magnitude {b_max:.6g} exceeds bound {spec.weight_bound:.6g}"
                )
    if spec.max_nonzero is not None:
        nnz = sum(
            int(np.count_nonzero(w)) + int(np.count_nonzero(b))
            for w, b in zip(params.weights, params.biases)
        )
        if nnz > spec.max_nonzero:
            violations.append(f"nonzero count {nnz} exceeds budget {spec.max_nonzero}")
    if spec.output_bound is not None and probe_inputs is not None:
        out = forward(params, probe_inputs)
        out_max = float(np.max(np.abs(out))) if out.size else 0.0
        if out_max > spec.output_bound:
            violations.append(
                f"output magnitude {out_max:.6g} exceeds bound {spec.output_bound:.6g} on probes"
            )
    return violations


def _spec_to_header(spec: NetworkClassSpec) -> bytes:
    parts = [
        _binfmt.pack_u32(spec.in_dim),
        _binfmt.pack_u32(spec.out_dim),
        _binfmt.pack_u32(spec.depth),
        _binfmt.pack_u32(spec.width),
        _binfmt.pack_u32(
            _binfmt.U32_UNBOUNDED if spec.max_nonzero is None else spec.max_nonzero
        ),
        _binfmt.pack_f64(np.inf if spec.weight_bound is None else spec.weight_bound),
        _binfmt.pack_f64(np.inf if spec.output_bound is None else spec.output_bound),
    ]
    return b"".join(parts)


def network_to_bytes(params: MlpParameters, spec: NetworkClassSpec) -> bytes:
    """Serialize one network to the MOLB1 container (bit-exact floats)."""
    buf = io.BytesIO()
    buf.write(_MAGIC)
    buf.write(_binfmt.pack_u32(_FORMAT_VERSION))
    buf.write(_spec_to_header(spec))
    buf.write(_binfmt.pack_u32(params.depth))
    for w, b in zip(params.weights, params.biases):
        buf.write(_binfmt.pack_u32(w.shape[0]))
        buf.write(_binfmt.pack_u32(w.shape[1]))
        buf.write(_binfmt.pack_f64_array(w))
        buf.write(_binfmt.pack_f64_array(b))
    return buf.getvalue()


def network_from_stream(f: BinaryIO) -> tuple[MlpParameters, NetworkClassSpec]:
    """Parse one MOLB1 container from a stream positioned at its magic."""
    magic = _binfmt.read_exact(f, len(_MAGIC), "magic")
    if magic != _MAGIC:
        raise ValueError(f"bad magic: expected {_MAGIC!r}, got {magic!r}")
    version = _binfmt.read_u32(f, "format version")
    if version != _FORMAT_VERSION:
        raise ValueError(f"unsupported container version {version}")
    in_dim = _binfmt.read_u32(f, "in_dim")
    out_dim = _binfmt.read_u32(f, "out_dim")
    depth = _binfmt.read_u32(f, "depth")
    width = _binfmt.read_u32(f, "width")
    raw_nnz = _binfmt.read_u32(f, "max_nonzero")
    weight_bound = _binfmt.read_f64(f, "weight_bound")
    output_bound = _binfmt.read_f64(f, "output_bound")
    spec = NetworkClassSpec(
        in_dim=in_dim,
        out_dim=out_dim,
        depth=depth,
        width=width,
        max_nonzero=None if raw_nnz == _binfmt.U32_UNBOUNDED else raw_nnz,
        weight_bound=None if np.isinf(weight_bound) else weight_bound,
        output_bound=None if np.isinf(output_bound) else output_bound,
    )
    n_layers = _binfmt.read_u32(f, "layer count")
    if n_layers != depth:
        raise ValueError(f"layer count {n_layers} does not match declared depth {depth}")
    weights = []
    biases = []
    for idx in range(n_layers):
        rows = _binfmt.read_u32(f, f"layer {idx} rows")
        cols = _binfmt.read_u32(f, f"layer {idx} cols")
        w = _binfmt.read_f64_array(f, rows * cols, f"layer {idx} weights").reshape(rows, cols)
        b = _binfmt.read_f64_array(f, rows, f"layer {idx} biases")
        weights.append(w)
        biases.append(b)
    return MlpParameters(weights=tuple(weights), biases=tuple(biases)), spec


def write_network(path: str, params: MlpParameters, spec: NetworkClassSpec) -> None:
    with open(path, "wb") as f:
        f.write(network_to_bytes(params, spec))


def read_network(path: str) -> tuple[MlpParameters, NetworkClassSpec]:
    with open(path, "rb") as f:
        params, spec = network_from_stream(f)
        trailing = f.read(1)
    if trailing:
        raise ValueError("trailing bytes after network container")
    return params, spec
