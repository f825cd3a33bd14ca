import json

import numpy as np
import pytest

from equiaffine import __version__
from equiaffine.cli import build_parser, main, parse_args
from equiaffine.extensions import read_grid, write_grid


@pytest.fixture
def cubic_file(tmp_path):
    path = str(tmp_path / 'cubic.json')
    assert main(['generate', '--ell', '0', '--f', '6', '--nu', '9',
                 '--nv', '11', '--frames', '--out', path]) == 0
    return path


def test_generate(cubic_file):
    grid = read_grid(cubic_file)
    assert (grid.nu, grid.nv) == (9, 11)
    assert grid.has_frames
    uu, vv = grid.mesh()
    np.testing.assert_allclose(grid.points[..., 0], uu + 3 * vv ** 2,
                               atol=1e-9)
    assert grid.meta['f'] == '6.0'


def test_generate_to_standard_output(capsys):
    assert main(['generate', '--preset', 'saddle', '--nu', '2',
                 '--nv', '3']) == 0
    document = json.loads(capsys.readouterr().out)
    assert document['format'] == 'affine-surface-grid/1'
    assert 'frames' not in document
    assert document['meta']['presets'] == 'saddle'
    assert len(document['points']) == 3


def test_generate_preset_with_obj(tmp_path):
    out, obj = str(tmp_path / 'cos.json'), str(tmp_path / 'cos.obj')
    assert main(['generate', '--preset', 'cos', '--a', '2', '--nu', '3',
                 '--nv', '4', '--out', out, '--obj', obj]) == 0
    assert read_grid(out).meta['ell'] == repr(-4.0)
    with open(obj) as file:
        assert sum(line.startswith('f ') for line in file) == 12


def test_generate_syntax_error(capsys):
    assert main(['generate', '--ell', 'sin(', '--f', '0']) == 2
    assert 'offset 5' in capsys.readouterr().err


def test_generate_needs_ell_and_f(capsys):
    assert main(['generate', '--ell', '0']) == 2
    assert main(['generate', '--preset', 'torus']) == 2
    assert main(['generate', '--ell', '0', '--f', '0',
                 '--v-min', '1', '--v-max', '0']) == 2


def test_generate_preset_rejects_ell(capsys):
    assert main(['generate', '--preset', 'cosh', '--ell', '9']) == 2
    assert '--preset' in capsys.readouterr().err


def test_generate_diverges(capsys):
    with np.errstate(over='ignore', invalid='ignore'):
        code = main(['generate', '--ell', 'exp(1000*v)', '--f', '0'])
    assert code == 3
    assert 'diverged' in capsys.readouterr().err


def test_analyze_expression(capsys):
    assert main(['analyze', '--surface', 'u;v;u*v', '--nu', '10',
                 '--nv', '10']) == 0
    out = capsys.readouterr().out
    assert '100 hyperbolic' in out
    assert 'improper-sphere' in out


def test_analyze_elliptic(capsys):
    assert main(['analyze', '--surface', 'u;v;u^2+v^2', '--nu', '5',
                 '--nv', '5']) == 4
    assert 'surface is elliptic' in capsys.readouterr().err

    assert main(['analyze', '--surface', 'u;v;u^2+v^2', '--nu', '5',
                 '--nv', '5', '--no-affine']) == 0


def test_analyze_grid_with_reports(tmp_path, capsys):
    grid, report, table = (str(tmp_path / name) for name in
                           ('g.json', 'report.json', 'report.csv'))
    assert main(['generate', '--ell', 'sin(v)', '--f', 'v^2', '--nu', '9',
                 '--nv', '41', '--v-min=-0.5', '--v-max', '0.5',
                 '--out', grid]) == 0
    assert main(['analyze', '--in', grid, '--report', report,
                 '--csv', table]) == 0

    with open(report) as file:
        document = json.load(file)
    assert document['format'] == 'affine-invariant-report/1'
    assert document['summary']['mode'] == 'grid'
    assert document['summary']['max_abs_H_aff'] <= 1e-5
    assert len(document['points']) == 9 * 41

    with open(table) as file:
        assert file.readline().startswith('u,v,type,h11')


def test_analyze_needs_one_input(capsys):
    assert main(['analyze']) == 2
    assert main(['analyze', '--surface', 'u;v;u*v', '--in', 'x.json']) == 2


def test_verify_fresh_grid(tmp_path, capsys):
    grid, report = str(tmp_path / 'g.json'), str(tmp_path / 'r.json')
    source = ['--ell', '9', '--f', '32*sin(8*v)']
    assert main(['generate'] + source + [
        '--v-min=-0.25', '--v-max', '0.25', '--nu', '9', '--nv', '401',
        '--frames', '--out', grid]) == 0
    assert main(['verify', '--in', grid, '--tol', '1e-4',
                 '--report', report] + source) == 0

    out = capsys.readouterr().out
    assert 'mc-normal-form' in out
    assert out.rstrip().endswith('verdict: PASS')
    with open(report) as file:
        assert json.load(file)['passed']


def test_verify_failure(tmp_path, sin_grid, capsys):
    uu, vv = sin_grid.mesh()
    points = sin_grid.points.copy()
    points[..., 2] += 1e-3 * np.cos(5 * uu) * np.cos(5 * vv)
    path = str(tmp_path / 'bumped.json')
    write_grid(sin_grid.replace(points=points, frames=None), path)

    assert main(['verify', '--in', path]) == 1
    assert 'verdict: FAIL' in capsys.readouterr().out


def test_verify_usage(cubic_file):
    assert main(['verify']) == 2
    assert main(['verify', '--in', cubic_file, '--ell', '0']) == 2


def test_verify_normal_form_needs_frames(tmp_path, sin_grid):
    path = str(tmp_path / 'bare.json')
    write_grid(sin_grid, path, frames=False)
    assert main(['verify', '--in', path, '--ell', 'sin(v)',
                 '--f', 'v^2']) == 2


def test_export(tmp_path, cubic_file):
    obj, table = str(tmp_path / 'm.obj'), str(tmp_path / 'g.csv')
    assert main(['export', '--in', cubic_file, '--obj', obj,
                 '--csv', table]) == 0
    with open(obj) as file:
        lines = file.read().splitlines()
    assert sum(line.startswith('v ') for line in lines) == 99
    with open(table) as file:
        assert len(file.read().splitlines()) == 100

    assert main(['export', '--in', cubic_file]) == 2


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / 'broken.json'
    path.write_text('[1, 2')
    assert main(['analyze', '--in', str(path)]) == 2
    assert main(['export', '--in', str(tmp_path / 'missing.json'),
                 '--obj', str(tmp_path / 'm.obj')]) == 2


def test_config_file(tmp_path):
    config, out = tmp_path / 'config.json', str(tmp_path / 'g.json')
    config.write_text(json.dumps({
        'ell': '0', 'f': '6', 'nu': 5, 'nv': 9, 'frames': True}))
    assert main(['--config', str(config), 'generate', '--out', out]) == 0
    grid = read_grid(out)
    assert (grid.nu, grid.nv) == (5, 9)
    assert grid.has_frames

    # Explicit flags win over the file
    assert main(['--config', str(config), 'generate', '--nu', '7',
                 '--out', out]) == 0
    assert read_grid(out).nu == 7


def test_config_file_errors(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'colour': 'blue'}))
    assert main(['--config', str(config), 'generate', '--ell', '0',
                 '--f', '0']) == 2

    config.write_text('[]')
    assert main(['--config', str(config), 'generate', '--ell', '0',
                 '--f', '0']) == 2

    assert main(['--config', str(tmp_path / 'missing.json'),
                 'generate', '--ell', '0', '--f', '0']) == 2


def test_parser(capsys):
    parser = build_parser()
    assert set(parser.subcommands) == {'generate', 'analyze', 'verify',
                                       'export'}
    _, args = parse_args(['-vv', 'analyze', '--surface', 'u;v;u*v'])
    assert args.verbose == 2
    assert args.nu == 21 and args.nv == 41

    assert main(['--version']) == 0
    assert __version__ in capsys.readouterr().out
    assert main([]) == 2
