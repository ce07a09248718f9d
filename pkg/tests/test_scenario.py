import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fluctoptics.presets import PRESETS, load_preset, preset_text
from fluctoptics.qstates import SqueezedBeam
from fluctoptics.scenario import EXIT_CONFIG, EXIT_NOINPUT, ConfigError, dump_config, load_config, parse_config

BEAM = """\
[scenario]
name = beam
[state]
kind = squeezed_beam
wavelength = {wavelength}
medium_index = 3.5
q = {q}
delta_k_over_k = 1e-3
delta_theta = {dth}
[sweep]
axis = t
start = 0
stop = 10
points = {points}
"""


def beam_text(wavelength="10.6 um", q="1.5", dth="0.1", points="11"):
    return BEAM.format(wavelength=wavelength, q=q, dth=dth, points=points)


class TestParse:
    def test_empty(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("")
        assert exc.value.exit_code == EXIT_CONFIG
        assert exc.value.errors == ["missing [state] section"]

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(beam_text() + "bogus = 1\n")
        assert exc.value.exit_code == EXIT_CONFIG
        assert any("bogus" in e for e in exc.value.errors)

    def test_delta_theta_out_of_range(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(beam_text(dth="2pi"))
        assert exc.value.exit_code == EXIT_CONFIG
        assert any("delta_theta" in e for e in exc.value.errors)

    def test_all_errors_collected(self):
        text = beam_text(q="abc", points="0") + "bogus = 1\n[nonsense]\n"
        with pytest.raises(ConfigError) as exc:
            parse_config(text)
        assert len(exc.value.errors) >= 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            load_config(tmp_path / "nope.ini")
        assert exc.value.exit_code == EXIT_NOINPUT

    def test_missing_material_file(self, tmp_path):
        p = tmp_path / "s.ini"
        p.write_text(beam_text() + "[material]\nfile = absent.txt\n")
        with pytest.raises(ConfigError) as exc:
            load_config(p)
        assert exc.value.exit_code == EXIT_NOINPUT

    def test_material_file_relative(self, tmp_path):
        (tmp_path / "m.txt").write_text("name = m\nn0 = 2\nchi3.x.x.x.x = 1e-18 m2V-2\n")
        p = tmp_path / "s.ini"
        p.write_text(beam_text() + "[material]\nfile = m.txt\n")
        assert load_config(p).build_material().name == "m"

    def test_units(self):
        a = parse_config(beam_text(wavelength="10.6 um")).build_state()
        b = parse_config(beam_text(wavelength="10600 nm")).build_state()
        c = parse_config(beam_text(wavelength="10.6e-6 m")).build_state()
        assert a.k == pytest.approx(b.k, rel=1e-14) == pytest.approx(c.k, rel=1e-14)

    def test_squeezing_db(self):
        text = beam_text().replace("q = 1.5", "squeezing_db = 10")
        state = parse_config(text).build_state()
        assert state.q == pytest.approx(1.1513, abs=1e-4)

    def test_sweep_axis_mismatch(self):
        text = beam_text().replace("axis = t", "axis = T")
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_mode_set(self):
        text = "[state]\nkind = mode_set\nvolume = 10\nmode.0 = 0 1 0 1 0.5 0\nmode.1 = 1 0 0 2 0.2 0.1\n"
        ms = parse_config(text).build_state()
        assert len(ms.modes) == 2 and ms.modes[1].omega == 2.0


class TestPresets:
    def test_cdgeas2_squeezed(self):
        s = load_preset("cdgeas2-squeezed")
        b = s.build_state()
        assert isinstance(b, SqueezedBeam)
        assert b.q == 1.5 and b.medium_index == 3.5
        assert 2 * math.pi / b.k == pytest.approx(10.6)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_docs_list_tolerances(self, name):
        assert "%" in PRESETS[name][1] or "1e-3" in PRESETS[name][1] or "[" in PRESETS[name][1]

    def test_unknown(self):
        with pytest.raises(KeyError):
            preset_text("nope")


class TestRoundTrip:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets(self, name):
        s = load_preset(name)
        again = parse_config(dump_config(s))
        assert again == s
        assert dump_config(again) == dump_config(s)

    @given(
        st.floats(1.0, 50.0),
        st.floats(0.0, 3.0),
        st.floats(1e-3, math.pi),
        st.integers(2, 50),
    )
    def test_beam(self, wl, q, dth, points):
        s = parse_config(beam_text(repr(wl), repr(q), repr(dth), str(points)))
        again = parse_config(dump_config(s))
        assert again == s
        np.testing.assert_array_equal(again.build_sweep().values, s.build_sweep().values)
