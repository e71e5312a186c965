"""Trajectory and phase-diagram files.

Trajectories are CSV with a ``# key=value`` metadata block. Phase diagrams
are CSV or NPZ with a JSON sidecar (``<path>.json``) holding the sweep
settings, the wall time and per-cell error messages. Floats are written
with 17 significant digits so a read-then-write cycle reproduces the file.
"""
import json
import os

import numpy as np
import structlog

from config import VERSION
from exceptions import ConfigurationError, StorageError
from models.models import ModelKind, Trajectory
from models.registry import jx_over_n
from utils.helpers import format_float, parse_float, parse_optional_int
from utils.phase_classifier import PhaseDiagnostics, PhaseKind, PhaseLabel
from utils.sweep import CellResult, PhaseDiagram, SweepConfig

logger = structlog.get_logger(__name__)

JX_COLUMN = 'Jx_over_N'
DIAGRAM_COLUMNS = ('axis1', 'axis2', 'label', 'n', 'max_amp', 'd2', 'sigma_amp', 'dominant_freq')


def sidecar_path(path):
    return f'{path}.json'


def perturbed_path(path):
    """Where the delta-shifted twin of a trajectory file lives: ``<stem>.perturbed<ext>``."""
    stem, ext = os.path.splitext(path)
    return f'{stem}.perturbed{ext or ".csv"}'


def _known_model(model_id):
    try:
        return ModelKind.parse(model_id)
    except ConfigurationError:
        return None


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_trajectory(path, trajectory, params=None):
    """Write ``trajectory`` as CSV: time column, state components, then J_x/N."""
    kind = _known_model(trajectory.model_id)
    names = list(trajectory.components) or [f'c{i}' for i in range(trajectory.samples.shape[1])]
    columns = [trajectory.times[:, None], trajectory.samples]
    if kind is not None:
        names.append(JX_COLUMN)
        columns.append(jx_over_n(trajectory.samples, kind)[:, None])
    meta = {
        'model': trajectory.model_id,
        't0': format_float(trajectory.t0),
        'dt': format_float(trajectory.dt),
        'stride': trajectory.stride,
        'diverged': 'true' if trajectory.diverged else 'false',
        'truncation_index': '' if trajectory.truncation_index is None else trajectory.truncation_index,
        'params': json.dumps(params or {}, sort_keys=True),
        'version': VERSION,
    }
    _ensure_parent(path)
    with open(path, 'w', newline='') as handle:
        for key, value in meta.items():
            handle.write(f'# {key}={value}\n')
        handle.write(','.join(['t'] + names) + '\n')
        np.savetxt(handle, np.hstack(columns), fmt='%.17g', delimiter=',')
    logger.info('trajectory_written', path=path, samples=len(trajectory))
    return path


def read_trajectory(path):
    """
    Read a trajectory file written by write_trajectory

    Returns:
        tuple: (Trajectory, params dict)

    Raises:
        StorageError: missing metadata, bad header or non-numeric rows
    """
    try:
        with open(path) as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise StorageError(f'cannot read {path}: {exc}') from None

    meta = {}
    body = []
    for line in lines:
        if line.startswith('#'):
            key, sep, value = line[1:].strip().partition('=')
            if not sep:
                raise StorageError(f'{path}: malformed metadata line {line!r}')
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if not body:
        raise StorageError(f'{path}: no header row')

    header = [name.strip() for name in body[0].split(',')]
    if header[0] != 't':
        raise StorageError(f'{path}: first column must be t')
    try:
        table = np.loadtxt(body[1:], delimiter=',', ndmin=2, dtype=np.float64)
        t0 = parse_float(meta['t0'])
        dt = parse_float(meta['dt'])
        stride = int(meta['stride'])
        truncation = parse_optional_int(meta.get('truncation_index', ''))
        params = json.loads(meta.get('params') or '{}')
    except (KeyError, ValueError) as exc:
        raise StorageError(f'{path}: malformed trajectory file ({exc})') from None
    if table.shape[0] == 0 or table.shape[1] != len(header):
        raise StorageError(f'{path}: expected {len(header)} columns, found {table.shape[1]}')

    names = header[1:]
    keep = [i for i, name in enumerate(names) if name != JX_COLUMN]
    trajectory = Trajectory(
        samples=np.ascontiguousarray(table[:, 1:][:, keep]),
        t0=t0,
        dt=dt,
        stride=stride,
        model_id=meta.get('model', 'custom'),
        components=tuple(names[i] for i in keep),
        diverged=meta.get('diverged', 'false').lower() == 'true',
        truncation_index=truncation,
    )
    return trajectory, params


def _format_for(path, output_format=None):
    if output_format:
        return output_format.lower()
    return 'npz' if str(path).lower().endswith('.npz') else 'csv'


def _write_sidecar(path, diagram, fmt):
    config = diagram.config
    metadata = {
        'version': VERSION,
        'format': fmt,
        'axis1': config.axis1.name,
        'axis2': config.axis2.name,
        'cells': len(diagram.cells),
        'wall_time': diagram.wall_time,
        'config': config.echo(),
        'errors': {str(index): message for index, message in diagram.errors().items()},
    }
    with open(sidecar_path(path), 'w') as handle:
        json.dump(metadata, handle, indent=2, sort_keys=True)
        handle.write('\n')


def write_diagram(path, diagram, output_format=None):
    """Write a phase diagram as CSV or NPZ plus its JSON sidecar."""
    fmt = _format_for(path, output_format)
    _ensure_parent(path)
    rows = [_cell_row(cell) for cell in diagram.cells]
    if fmt == 'npz':
        arrays = {
            'axis1': np.array([cell.axis1 for cell in diagram.cells], dtype=np.float64),
            'axis2': np.array([cell.axis2 for cell in diagram.cells], dtype=np.float64),
            'label': np.array([cell.label.kind.value for cell in diagram.cells], dtype=str),
            'n': np.array([-1 if cell.label.order is None else cell.label.order for cell in diagram.cells],
                          dtype=np.int64),
        }
        for offset, name in enumerate(DIAGRAM_COLUMNS[4:]):
            arrays[name] = np.array([row[4 + offset] for row in rows], dtype=np.float64)
        # a file handle keeps numpy from appending its own extension
        with open(path, 'wb') as handle:
            np.savez(handle, **arrays)
    elif fmt == 'csv':
        with open(path, 'w', newline='') as handle:
            handle.write(','.join(DIAGRAM_COLUMNS) + '\n')
            for row in rows:
                text = [format_float(row[0]), format_float(row[1]), row[2],
                        '' if row[3] is None else str(row[3])]
                text.extend(format_float(value) for value in row[4:])
                handle.write(','.join(text) + '\n')
    else:
        raise ConfigurationError(f'unknown diagram format {fmt!r}')
    _write_sidecar(path, diagram, fmt)
    logger.info('diagram_written', path=path, format=fmt, cells=len(rows))
    return path


def _cell_row(cell):
    d = cell.label.diagnostics
    return (cell.axis1, cell.axis2, cell.label.kind.value, cell.label.order,
            d.max_amp, d.d2, d.sigma_amp, d.dominant_freq)


def _label(kind, order, max_amp, d2, sigma_amp, dominant_freq):
    try:
        phase = PhaseKind(kind)
    except ValueError:
        raise StorageError(f'unknown phase label {kind!r}') from None
    diagnostics = PhaseDiagnostics(max_amp=max_amp, d2=d2, sigma_amp=sigma_amp,
                                   response_order_n=order, dominant_freq=dominant_freq)
    return PhaseLabel(phase, order, diagnostics)


def _read_sidecar(path):
    try:
        with open(sidecar_path(path)) as handle:
            metadata = json.load(handle)
        return metadata, SweepConfig.from_echo(metadata['config'])
    except OSError as exc:
        raise StorageError(f'missing sidecar for {path}: {exc}') from None
    except (ValueError, KeyError, TypeError, ConfigurationError) as exc:
        raise StorageError(f'malformed sidecar for {path}: {exc}') from None


def _read_rows_csv(path):
    with open(path) as handle:
        lines = [line for line in handle.read().splitlines() if line.strip()]
    if not lines or tuple(lines[0].split(',')) != DIAGRAM_COLUMNS:
        raise StorageError(f'{path}: header must be {",".join(DIAGRAM_COLUMNS)}')
    rows = []
    for line in lines[1:]:
        fields = line.split(',')
        if len(fields) != len(DIAGRAM_COLUMNS):
            raise StorageError(f'{path}: bad row {line!r}')
        try:
            numbers = [parse_float(value) for value in fields[4:]]
            rows.append((parse_float(fields[0]), parse_float(fields[1]),
                         fields[2].strip(), parse_optional_int(fields[3]), *numbers))
        except ValueError:
            raise StorageError(f'{path}: non-numeric field in {line!r}') from None
    return rows


def _read_rows_npz(path):
    try:
        with np.load(path, allow_pickle=False) as data:
            columns = {name: data[name] for name in DIAGRAM_COLUMNS}
    except (OSError, KeyError, ValueError) as exc:
        raise StorageError(f'{path}: malformed npz ({exc})') from None
    rows = []
    for i in range(len(columns['label'])):
        order = int(columns['n'][i])
        rows.append((float(columns['axis1'][i]), float(columns['axis2'][i]), str(columns['label'][i]),
                     None if order < 0 else order,
                     *(float(columns[name][i]) for name in DIAGRAM_COLUMNS[4:])))
    return rows


def read_diagram(path):
    """
    Read a phase diagram written by write_diagram

    Returns:
        PhaseDiagram with the sweep settings restored from the sidecar

    Raises:
        StorageError: missing or malformed data or sidecar
    """
    if not os.path.isfile(path):
        raise StorageError(f'diagram not found: {path}')
    metadata, config = _read_sidecar(path)
    fmt = _format_for(path, metadata.get('format'))
    rows = _read_rows_npz(path) if fmt == 'npz' else _read_rows_csv(path)
    expected = config.axis1.count * config.axis2.count
    if len(rows) != expected:
        raise StorageError(f'{path}: expected {expected} cells, found {len(rows)}')
    errors = {int(index): message for index, message in (metadata.get('errors') or {}).items()}
    cells = tuple(
        CellResult(index, row[0], row[1], _label(*row[2:]), errors.get(index))
        for index, row in enumerate(rows)
    )
    return PhaseDiagram(config, cells, float(metadata.get('wall_time', 0.0)))
