"""Built-in scenarios reproducing the reference estimates."""

from __future__ import annotations

from .scenario import Scenario, parse_config

__all__ = ["PRESETS", "PRESET_SUBCOMMANDS", "preset_text", "load_preset"]


_CDGEAS2_SQUEEZED = """\
# 10 dB-class squeezed vacuum beam at 10.6 um in CdGeAs2.
# Sweep covers two full cycles of the 2 Omega t oscillation at y = 0.
[scenario]
name = cdgeas2-squeezed
outputs = csv, json

[material]
preset = cdgeas2

[state]
kind = squeezed_beam
wavelength = 10.6 um
medium_index = 3.5
q = 1.5
eta = 0.0
delta_k_over_k = 1e-3
delta_theta = 0.1

[sweep]
axis = t
start = 0.0
stop = 37.1 um
points = 401
y = 0.0
"""

_FIG2 = """\
# Probe E = cos(10 z) in a medium with f = -0.25 sin(z - 0.5 t).
[scenario]
name = fig2
outputs = csv, json

[solver]
points = 1024
length = 2pi
cfl = 0.8
v0 = 1.0
amplitude = -0.25
k_mod = 1.0
omega_mod = 0.5
form = reciprocal
t_end = 2pi
snapshots = 4
wavenumber = 10.0
init_speed = 1.0
threshold = 1e-3
"""

_THERMAL_2600 = """\
# Blackbody <E^2> at laboratory and hot-filament temperatures.
[scenario]
name = thermal-2600
outputs = csv, json

[material]
preset = cdgeas2

[state]
kind = thermal
T = 2600 K

[sweep]
axis = T
values = 0, 300, 1300, 2600
"""

_CASIMIR_SWEEP = """\
# <E^2> near a plate with plasma wavelength 0.2 um, across the crossover.
[scenario]
name = casimir-sweep
outputs = csv, json

[material]
preset = cdgeas2

[state]
kind = casimir
z = 1.0 um
lambda_P = 0.2 um

[sweep]
axis = z
start = 0.05 um
stop = 5.0 um
points = 41
spacing = log
"""

PRESETS = {
    "cdgeas2-squeezed": (
        _CDGEAS2_SQUEEZED,
        "Omega k^3/4pi^2 = 8.93e-4 um^-4 (0.5%); static <:E^2:> 4.05e-3 x 1e-4 um^-4 (1%); "
        "cosh q/sinh q = 1.105 (0.5%); dn_quoted peak 2.88e-15 (2%).",
    ),
    "fig2": (
        _FIG2,
        "Probe snapshots and spectrum; sidebands at 10 +/- 1 above 1e-3 of the carrier; "
        "local wavelength anti-correlated with f (r < -0.5).",
    ),
    "thermal-2600": (_THERMAL_2600, "<E^2>(2600 K) in [0.98, 1.20] um^-4; zero at 0 K; T^4 scaling."),
    "casimir-sweep": (
        _CASIMIR_SWEEP,
        "3/(16 pi^2 z^4) for z >= lambda_P (1.900e-2 um^-4 at 1 um, 0.1%); "
        "sqrt(2)/(16 lambda_P z^3) below; slopes -4 and -3.",
    ),
}

# subcommands each preset is meant to be run with
PRESET_SUBCOMMANDS = {
    "cdgeas2-squeezed": ("e2", "birefringence"),
    "fig2": ("propagate",),
    "thermal-2600": ("ambient", "birefringence"),
    "casimir-sweep": ("ambient", "birefringence"),
}


def preset_text(name: str) -> str:
    try:
        return PRESETS[name][0]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None


def load_preset(name: str) -> Scenario:
    return parse_config(preset_text(name))
