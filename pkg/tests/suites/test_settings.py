from __future__ import annotations

from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.exceptions import ConfigError
from qabel.settings import parse_complex
from qabel.settings import Settings

if TYPE_CHECKING:
    from pathlib import Path


class TestSettings:
    def test_singleton(self, settings: Settings) -> None:
        assert settings is Settings()

    def test_defaults(self, settings: Settings) -> None:
        assert 'INFO' == settings.log_level
        assert 'qabel.log' == settings.path_to_log_file.name
        assert 0 == settings.get_int('qabel', 'seed', 5)

    def test_lists(self, settings: Settings) -> None:
        assert (1j, 0.3 + 1.1j) == settings.get_complexes(
            'abel-curve', 'taus', ()
        )
        assert (0.2, 0.1, 0.05, 0.025) == settings.get_floats(
            'tubular', 'radii', ()
        )
        assert (1, 2, 4) == tuple(
            int(d) for d in settings.get_floats('abel-curve', 'degrees', ())
        )

    def test_fallbacks(self, settings: Settings) -> None:
        assert 0.5 == settings.get_float('nowhere', 'x', 0.5)
        assert 3 == settings.get_int('group', 'nothing', 3)
        assert 2j == settings.get_complex('abel-curve', 'missing', 2j)
        assert () == settings.get_complexes('abel-curve', 'poles', ())

    def test_override(self, settings: Settings) -> None:
        settings.override('abel-curve', 'poles', '0.2+0.3i, 0.1')
        assert (0.2 + 0.3j, 0.1) == settings.get_complexes(
            'abel-curve', 'poles', ()
        )
        settings.override('new-section', 'tolerance', '1e-3')
        assert 1e-3 == settings.get_float('new-section', 'tolerance', 1.0)

    def test_rereads_on_construction(self, settings: Settings) -> None:
        settings.override('quaternion', 'points', '7')
        assert 100 == Settings().get_int('quaternion', 'points', 1)

    @pytest.mark.parametrize(
        ('getter', 'message'),
        [
            ('get_int', 'The option [quaternion] points must be an integer!'),
            ('get_float', 'The option [quaternion] points must be a number!'),
        ],
        ids=lambda arg: f'{arg}',
    )
    def test_bad_numbers(
        self, settings: Settings, getter: str, message: str
    ) -> None:
        settings.override('quaternion', 'points', 'many')
        with pytest.raises(ConfigError, match='must be') as e:
            getattr(settings, getter)('quaternion', 'points', 1)
        assert message == str(e.value)

    def test_bad_list(self, settings: Settings) -> None:
        settings.override('tubular', 'radii', '0.2, wide')
        with pytest.raises(ConfigError, match='must list numbers') as e:
            settings.get_floats('tubular', 'radii', ())
        assert 'The option [tubular] radii must list numbers!' == str(e.value)

    def test_load(self, settings: Settings, tmp_path: Path) -> None:
        path = tmp_path / 'small.ini'
        path.write_text('[quaternion]\npoints = 12\n', encoding='utf-8')
        settings.load(str(path))
        assert 12 == settings.get_int('quaternion', 'points', 1)
        assert 1e-3 == settings.get_float('quaternion', 'tolerance', 1e-3)

    def test_load_missing(self, settings: Settings, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match='does not exist'):
            settings.load(str(tmp_path / 'absent.ini'))

    def test_load_unparsable(
        self, settings: Settings, tmp_path: Path
    ) -> None:
        path = tmp_path / 'broken.ini'
        path.write_text('points = 12\n', encoding='utf-8')
        with pytest.raises(ConfigError, match='Cannot parse broken.ini'):
            settings.load(str(path))


class TestParseComplex:
    @pytest.mark.parametrize(
        ('raw', 'expected'),
        [
            ('1i', 1j),
            ('0.3+1.1i', 0.3 + 1.1j),
            (' 0.2 + 0.3j ', 0.2 + 0.3j),
            ('-2', -2),
        ],
        ids=lambda arg: f'{arg!r}',
    )
    def test_parse(self, raw: str, expected: complex) -> None:
        assert expected == parse_complex(raw)

    def test_error(self) -> None:
        with pytest.raises(ConfigError, match='complex number') as e:
            parse_complex('tau', '[abel-curve] taus')
        assert (
            "The option [abel-curve] taus must be a complex number, "
            "got 'tau'!"
        ) == str(e.value)
