"""Discretization of the external photon continuum.

The cavity mode couples to a comb of external modes omega_q centred on
the lasing frequency. For coupling into free space the coupling element
is flat, G_q = i|G0|; an external mirror at half the round-trip distance
imprints a standing-wave structure, G_q = i|G0| sqrt(2) sin(delta_q
tau/2 + phi) with delta_q the detuning from the line centre and tau the
round-trip delay (the optical phase omega0*tau/2 is folded into phi mod
2pi). The phase convention G_q* = -G_q (purely imaginary couplings)
matches the light-light interaction antisymmetry.
"""

import math
from dataclasses import dataclass

import numpy as np


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class FreeSpace:
    pass


@dataclass(frozen=True)
class Mirror:
    delay: float  # round-trip delay tau = 2L/c in fs


@dataclass(frozen=True)
class ModeGrid:
    """External-mode frequencies and couplings.

    omegas is strictly increasing and symmetric about omega0 within one
    spacing; for even n_modes no mode sits exactly on resonance, which
    keeps the weakly damped resonant response integrable.
    """

    omegas: np.ndarray            # (N,), 1/fs
    couplings: np.ndarray         # (N,) complex, 1/fs
    mode_spacing: float           # 1/fs
    density_of_states: float      # fs, = 1/mode_spacing
    geometry: object              # FreeSpace or Mirror

    @property
    def n_modes(self):
        return len(self.omegas)

    def recurrence_time(self):
        """Revival time 2*pi/mode_spacing of the discretized continuum.

        Runs much longer than this see the finite comb, not a continuum;
        callers should check it against their horizon (external-field
        damping suppresses the revivals by exp(-kappa_ext * t_rec)).
        """
        return 2.0 * math.pi / self.mode_spacing

    def detunings(self, omega0):
        return self.omegas - omega0


def build_mode_grid(n_q, bandwidth, geometry, params):
    """Lay out n_q modes over `bandwidth` around params.omega0.

    Frequencies are omega0 + (j - (n_q-1)/2) * dw for j = 0..n_q-1 with
    dw = bandwidth/n_q. Couplings follow the geometry; the amplitude is
    params.g0, or the Wigner-Weisskopf match to params.kappa when g0 is
    unset (see calibrate_g0).
    """
    if n_q < 2:
        raise GridError(f"need at least 2 external modes, got {n_q}")
    if not bandwidth > 0.0:
        raise GridError(f"bandwidth must be > 0, got {bandwidth}")
    dw = bandwidth / n_q
    j = np.arange(n_q)
    omegas = params.omega0 + (j - (n_q - 1) / 2.0) * dw
    g0 = params.g0
    if g0 is None:
        g0 = math.sqrt(params.kappa * dw / math.pi)
    if isinstance(geometry, FreeSpace):
        couplings = np.full(n_q, 1j * g0, dtype=complex)
    elif isinstance(geometry, Mirror):
        # q L = omega_q * tau/2; the huge omega0*tau/2 offset lives in phi
        phase = (omegas - params.omega0) * (geometry.delay / 2.0) + params.feedback_phase
        couplings = 1j * g0 * math.sqrt(2.0) * np.sin(phase)
    else:
        raise GridError(f"unknown geometry {geometry!r}")
    omegas.setflags(write=False)
    couplings.setflags(write=False)
    return ModeGrid(omegas=omegas, couplings=couplings, mode_spacing=dw,
                    density_of_states=1.0 / dw, geometry=geometry)


def grid_for(params, run, feedback_on):
    """Grid used by the experiments: mirror when feedback is on, else free space."""
    geometry = Mirror(params.tau_delay) if feedback_on else FreeSpace()
    return build_mode_grid(run.n_modes, run.bandwidth_factor * params.kappa,
                           geometry, params)


def empty_grid(params):
    """Zero external modes; the quantized model then closes over the scalars."""
    z = np.zeros(0)
    return ModeGrid(omegas=z, couplings=z.astype(complex), mode_spacing=np.inf,
                    density_of_states=0.0, geometry=FreeSpace())


def calibrate_g0(target_kappa, grid):
    """Coupling amplitude that makes free-space decay match target_kappa.

    Golden-rule decay of the cavity amplitude into a flat continuum runs
    at pi |G0|^2 rho, so the photon number decays at 2 pi |G0|^2 rho.
    Matching an amplitude loss rate target_kappa gives
    |G0| = sqrt(target_kappa / (pi rho)).
    """
    if not isinstance(grid.geometry, FreeSpace):
        raise GridError("calibration is defined against the flat free-space continuum")
    if target_kappa < 0.0:
        raise GridError(f"target_kappa must be >= 0, got {target_kappa}")
    rho = grid.density_of_states
    if rho <= 0.0:
        raise GridError("grid has zero density of states")
    return math.sqrt(target_kappa / (math.pi * rho))
