"""Flat complex state vector layout for the correlation-expansion model.

The dynamical variables form three groups: 10 scalar slots (8 of them
real-valued occupations/photon moments stored in complex slots, plus the
two complex polarizations), 7 families of length-N complex vectors
indexed by the external mode q, and 7 families of NxN complex matrices
indexed by (q, q'). Everything is packed into one contiguous complex
array so generic steppers can treat the state as a single vector.
"""

from dataclasses import dataclass, field

import numpy as np

# scalar slot indices
FC, FV, FCE, FVE, NPH, FCPH, FVPH, KPH, P1, P3 = range(10)
N_SCALARS = 10

SCALAR_NAMES = ("f_c", "f_v", "f_ce", "f_ve", "n_ph",
                "f_c_ph", "f_v_ph", "K_ph", "p1", "p3")
REAL_SCALARS = (FC, FV, FCE, FVE, NPH, FCPH, FVPH, KPH)

VECTOR_FAMILIES = ("n_q0", "p1q", "f_c_q", "f_v_q", "K_q", "p_q3", "p_3q")
MATRIX_FAMILIES = ("n_qq", "f_c_qq", "f_v_qq", "K_qq", "K_up_qq",
                   "p3_qq", "p3_qqp")

HERMITIAN_FAMILIES = ("n_qq", "f_c_qq", "f_v_qq", "K_qq")
SYMMETRIC_FAMILIES = ("K_up_qq", "p3_qqp")


class StateLayout:
    """Index map from variable families to slices of the flat state."""

    def __init__(self, n_q):
        if n_q < 0:
            raise ValueError("n_q must be >= 0")
        self.n_q = n_q
        self.size = N_SCALARS + len(VECTOR_FAMILIES) * n_q \
            + len(MATRIX_FAMILIES) * n_q * n_q
        self._vec_off = {}
        self._mat_off = {}
        off = N_SCALARS
        for name in VECTOR_FAMILIES:
            self._vec_off[name] = off
            off += n_q
        for name in MATRIX_FAMILIES:
            self._mat_off[name] = off
            off += n_q * n_q
        assert off == self.size

    def new_state(self):
        return np.zeros(self.size, dtype=complex)

    def scalar(self, y, idx):
        return y[idx]

    def vec(self, y, name):
        off = self._vec_off[name]
        return y[off:off + self.n_q]

    def mat(self, y, name):
        off = self._mat_off[name]
        return y[off:off + self.n_q * self.n_q].reshape(self.n_q, self.n_q)

    def vectors(self, y):
        return tuple(self.vec(y, name) for name in VECTOR_FAMILIES)

    def matrices(self, y):
        return tuple(self.mat(y, name) for name in MATRIX_FAMILIES)


@dataclass
class QuantizedState:
    """Named view of one flat state (see `unpack`).

    Scalars are held by value; vector and matrix entries are numpy
    arrays (views into the flat array unless copy=True was requested).
    """

    layout: StateLayout
    f_c: complex
    f_v: complex
    f_ce: complex
    f_ve: complex
    n_ph: complex
    f_c_ph: complex
    f_v_ph: complex
    K_ph: complex
    p1: complex
    p3: complex
    n_q0: np.ndarray
    p1q: np.ndarray
    f_c_q: np.ndarray
    f_v_q: np.ndarray
    K_q: np.ndarray
    p_q3: np.ndarray
    p_3q: np.ndarray
    n_qq: np.ndarray
    f_c_qq: np.ndarray
    f_v_qq: np.ndarray
    K_qq: np.ndarray
    K_up_qq: np.ndarray
    p3_qq: np.ndarray
    p3_qqp: np.ndarray


def unpack(y, layout, copy=False):
    """Split a flat state into a QuantizedState of named parts."""
    if y.shape != (layout.size,):
        raise ValueError(f"state length {y.shape} does not match layout ({layout.size},)")
    maybe = (lambda a: a.copy()) if copy else (lambda a: a)
    kw = {name: complex(y[i]) for i, name in enumerate(SCALAR_NAMES)}
    kw.update({name: maybe(layout.vec(y, name)) for name in VECTOR_FAMILIES})
    kw.update({name: maybe(layout.mat(y, name)) for name in MATRIX_FAMILIES})
    return QuantizedState(layout=layout, **kw)


def pack(state):
    """Assemble a fresh flat array from a QuantizedState."""
    layout = state.layout
    y = layout.new_state()
    for i, name in enumerate(SCALAR_NAMES):
        y[i] = getattr(state, name)
    for name in VECTOR_FAMILIES:
        layout.vec(y, name)[:] = getattr(state, name)
    for name in MATRIX_FAMILIES:
        layout.mat(y, name)[:] = getattr(state, name)
    return y


def hermiticity_residual(y, layout):
    """max |X - X^dagger| over the Hermitian families, plus symmetry residuals.

    Returns the worst residual over the four Hermitian matrix families,
    the two symmetric families, and the imaginary parts of the
    real-typed scalars and of the n_qq diagonal.
    """
    res = 0.0
    for name in HERMITIAN_FAMILIES:
        m = layout.mat(y, name)
        if m.size:
            res = max(res, float(np.abs(m - m.conj().T).max()))
    for name in SYMMETRIC_FAMILIES:
        m = layout.mat(y, name)
        if m.size:
            res = max(res, float(np.abs(m - m.T).max()))
    for idx in REAL_SCALARS:
        res = max(res, abs(float(y[idx].imag)))
    return res
