from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.cli import _configure
from qabel.cli import build_parser
from qabel.cli import main
from qabel.cli import parse_args
from qabel.cli import run
from qabel.settings import Settings

if TYPE_CHECKING:
    from pathlib import Path
    from typing import Any
    from typing import List


class TestParseArgs:
    def test_verify(self) -> None:
        args = parse_args(['verify', 'all'])
        assert 'verify' == args.command
        assert 'all' == args.suite
        assert 'json' == args.output
        assert args.samples is None

    def test_abel(self) -> None:
        args = parse_args(
            ['abel', 'curve', '--tau', '1i,0.3+1.1i', '--P', '0.2+0.3i']
        )
        assert 'curve' == args.experiment
        assert '1i,0.3+1.1i' == args.tau
        assert '0.2+0.3i' == args.poles
        assert args.zeros is None

    @pytest.mark.parametrize(
        'argv',
        [
            ['verify', 'everything'],
            ['verify', 'all', '--samples', '0'],
            ['verify', 'all', '--format', 'xml'],
            ['abel', 'curve', '--tau', 'tau'],
            ['abel', 'surface'],
            [],
        ],
        ids=lambda arg: ' '.join(arg),
    )
    def test_usage_errors(self, argv: List[str], capsys: Any) -> None:
        with pytest.raises(SystemExit) as e:
            parse_args(argv)
        assert 2 == e.value.code
        assert 'usage: qabel' in capsys.readouterr().err

    @pytest.mark.parametrize(
        'option', ['--tau', '--P', '--Q'], ids=lambda arg: f'{arg}'
    )
    def test_curve_options_with_threefold(
        self, option: str, capsys: Any
    ) -> None:
        with pytest.raises(SystemExit) as e:
            parse_args(['abel', 'threefold', option, '0.9+0.9i'])
        assert 2 == e.value.code
        assert 'apply to the curve only' in capsys.readouterr().err

    def test_threefold(self) -> None:
        args = parse_args(['abel', 'threefold', '--samples', '4096'])
        assert 'threefold' == args.experiment
        assert args.poles is None

    def test_prog(self) -> None:
        assert 'qabel' == build_parser().prog


class TestRun:
    def test_json_report(self, tmp_path: Path) -> None:
        out = tmp_path / 'report.json'
        args = parse_args(
            ['verify', 'quaternion', '--samples', '10', '--out', str(out)]
        )
        records, code = run(args)
        assert 0 == code
        rows = json.loads(out.read_text(encoding='utf-8'))
        assert [record.id for record in records] == [r['id'] for r in rows]
        assert all('pass' == row['status'] for row in rows)
        assert all(10 == row['samples'] for row in rows)

    def test_text_to_stdout(self, capsys: Any) -> None:
        args = parse_args(
            ['verify', 'quaternion', '--samples', '5', '--format', 'text']
        )
        records, code = run(args)
        assert 0 == code
        lines = capsys.readouterr().out.splitlines()
        assert f'{len(records)} checks, 0 failed' == lines[-1]

    def test_seed_and_timings(self, tmp_path: Path) -> None:
        args = parse_args(
            [
                'verify',
                'quaternion',
                '--samples',
                '5',
                '--seed',
                '11',
                '--timings',
                '--out',
                str(tmp_path / 'report.json'),
            ]
        )
        records, _ = run(args)
        assert all(11 == record.seed for record in records)

    def test_zero_tolerance_fails(self, tmp_path: Path) -> None:
        args = parse_args(
            [
                'verify',
                'quaternion',
                '--samples',
                '5',
                '--tolerance',
                '-1',
                '--out',
                str(tmp_path / 'report.json'),
            ]
        )
        records, code = run(args)
        assert 1 == code
        assert all('fail' == record.status for record in records)

    def test_missing_config(self, tmp_path: Path) -> None:
        args = parse_args(
            ['verify', 'quaternion', '--config', str(tmp_path / 'no.ini')]
        )
        assert ([], 2) == run(args)

    def test_bad_option_value(self, tmp_path: Path) -> None:
        config = tmp_path / 'bad.ini'
        config.write_text('[quaternion]\npoints = many\n', encoding='utf-8')
        args = parse_args(
            [
                'verify',
                'quaternion',
                '--config',
                str(config),
                '--out',
                str(tmp_path / 'report.json'),
            ]
        )
        _, code = run(args)
        assert 2 == code

    def test_curve_overrides(self) -> None:
        args = parse_args(
            ['abel', 'curve', '--tau', '2i', '--Q', '0.5+0.5i']
        )
        settings = Settings()
        assert 0 == _configure(settings, args)
        assert (2j,) == settings.get_complexes('abel-curve', 'taus', ())
        assert (0.5 + 0.5j,) == settings.get_complexes(
            'abel-curve', 'zeros', ()
        )

    def test_main_exits_with_code(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as e:
            main(
                [
                    'verify',
                    'quaternion',
                    '--samples',
                    '5',
                    '--out',
                    str(tmp_path / 'report.json'),
                ]
            )
        assert 0 == e.value.code
