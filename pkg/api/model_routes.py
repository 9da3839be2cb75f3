"""Model API routes: exact probabilities and Monte Carlo runs."""
from flask import Blueprint, request, jsonify

from fitkit import fit_power_loglog, rank_series
from hsmodel import HierarchySpec, build_instance, exact_pmf, expected_frequencies, simulate
from services.sweep_service import Role, parse_level

bp = Blueprint('model', __name__, url_prefix='/api/model')

MAX_OBJECTS = 200_000
MAX_DRAWS = 10_000_000
DEFAULT_DRAWS = 1_000_000


def spec_from_body(data: dict) -> HierarchySpec:
    """HierarchySpec from a JSON body with n, m, fm, fw, fc (fw/fc default to uniform)."""
    try:
        n = int(data['n'])
        m = int(data['m'])
    except KeyError as e:
        raise ValueError(f"Missing field {e.args[0]!r}")
    if n > MAX_OBJECTS:
        raise ValueError(f"n={n} exceeds the API limit of {MAX_OBJECTS}")
    return HierarchySpec(
        n_objects=n,
        n_hierarchies=m,
        fm=parse_level(data.get('fm', 'uniform'), Role.FM),
        fw=parse_level(data.get('fw', 'uniform'), Role.FW),
        fc=parse_level(data.get('fc', 'uniform'), Role.FC),
    )


def _draws(data: dict) -> int:
    draws = int(data.get('draws', DEFAULT_DRAWS))
    if draws < 1 or draws > MAX_DRAWS:
        raise ValueError(f"draws must be in 1..{MAX_DRAWS}, got {draws}")
    return draws


@bp.route('/exact', methods=['POST'])
def exact():
    """Exact selection probabilities plus the expected-count power-law fit."""
    try:
        data = request.get_json() or {}
        inst = build_instance(spec_from_body(data))
        draws = _draws(data)
        probs = exact_pmf(inst)
        object_id, hierarchy, within = inst.object_layout()
        fit = fit_power_loglog(rank_series(expected_frequencies(inst, draws)))
        return jsonify({
            'counts': list(inst.counts),
            'objects': [
                {'object_id': int(o), 'hierarchy': int(h), 'within_rank': int(w), 'p': float(p)}
                for o, h, w, p in zip(object_id, hierarchy, within, probs)
            ],
            'fit': fit.to_dict(),
        }), 200

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500


@bp.route('/simulate', methods=['POST'])
def run_simulation():
    """Monte Carlo frequency table and its power-law fit."""
    try:
        data = request.get_json() or {}
        inst = build_instance(spec_from_body(data))
        draws = _draws(data)
        seed = int(data.get('seed', 0))
        table = simulate(inst, draws, seed)
        fit = fit_power_loglog(rank_series(table))
        return jsonify({
            'counts': list(inst.counts),
            'draws': draws,
            'seed': seed,
            'frequencies': [
                {'object_id': o, 'hierarchy': h, 'within_rank': w, 'count': int(c)}
                for o, h, w, c in table.rows()
            ],
            'fit': fit.to_dict(),
        }), 200

    except ValueError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        return jsonify({'error': f'Internal server error: {str(e)}'}), 500
