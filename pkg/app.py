# -*- coding: utf-8 -*-
"""
Application Flask - Moteur Kuratowski
=====================================
API REST: exécution de scripts .kura, orbites, monoïde, séparation
convexe, autotest et historique des exécutions.
"""

import logging
import os
from datetime import datetime
from functools import wraps

from apscheduler.schedulers.background import BackgroundScheduler
from apscheduler.triggers.cron import CronTrigger
from flask import Flask, jsonify, request
from flask_cors import CORS

from config import configure_logging, get_config, resolve_rng_seed
from dsl_service import ScriptService, parse_expression, parse_script
from errors import DslError, KuraError
from models import RunHistory, db, init_db
from monoid_service import GENERAL, MODES, enumerate_canonical, monoid_table
from orbit_service import enumerate_orbit
from selftest_service import SelftestService
from separation_service import ConvexHRep, SeparationCertificate, separate

logger = logging.getLogger(__name__)


def require_admin(f):
    """
    Décorateur pour protéger les routes admin.
    Vérifie le header X-Admin-Token ou refuse l'accès.
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        admin_password = app.config.get('ADMIN_PASSWORD')

        # Si pas de mot de passe configuré, accès libre (mode dev)
        if not admin_password:
            return f(*args, **kwargs)

        token = request.headers.get('X-Admin-Token', '')
        if token != admin_password:
            return jsonify({
                'error': 'Accès refusé - Authentification requise',
                'auth_required': True
            }), 401

        return f(*args, **kwargs)
    return decorated_function


# =============================================================================
# INITIALISATION DE L'APPLICATION
# =============================================================================

def create_app():
    """Factory pour créer l'application Flask"""

    app = Flask(__name__)

    config_class = get_config()
    app.config.from_object(config_class)
    configure_logging(config_class.LOG_LEVEL)

    CORS(app)

    db.init_app(app)
    init_db(app)

    return app


app = create_app()


def _payload():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise KuraError("Corps JSON attendu")
    return data


def _dim(data):
    dim = data.get('dim')
    return int(dim) if dim else None


@app.errorhandler(KuraError)
def handle_engine_error(error):
    """Erreurs du moteur -> 400, avec la position source si disponible"""
    body = {'error': str(error), 'type': type(error).__name__}
    if isinstance(error, DslError):
        body.update({'line': error.line, 'column': error.column, 'exit_code': error.exit_code})
    return jsonify(body), 400


@app.errorhandler(ValueError)
def handle_value_error(error):
    return jsonify({'error': str(error), 'type': 'ValueError'}), 400


# =============================================================================
# ROUTES - API MOTEUR
# =============================================================================

@app.route('/api/run', methods=['POST'])
def run_script_route():
    """Exécute un script .kura et enregistre le rapport"""
    data = _payload()
    source = data.get('source', '')
    report = ScriptService(_dim(data)).evaluate(parse_script(source))

    result = {'statements': [r.to_dict() for r in report.results], 'summary': report.summary()}
    entry = RunHistory.record('run', result, source=source,
                              verdict=report.summary()['verdict'], exit_code=report.exit_code)
    return jsonify({'success': True, 'history_id': entry.id, 'exit_code': report.exit_code,
                    'text': report.to_text(), **result})


@app.route('/api/orbit', methods=['POST'])
def orbit_route():
    """Orbite d'une expression sous f = lin et g = complément"""
    data = _payload()
    expression = data.get('expr', '')
    value = ScriptService(_dim(data)).evaluate_expression(parse_expression(expression))
    orbit = enumerate_orbit(value.set)

    result = orbit.to_dict()
    entry = RunHistory.record('orbit', result, source=expression)
    return jsonify({'success': True, 'history_id': entry.id, 'text': orbit.to_text(), **result})


@app.route('/api/monoid', methods=['GET'])
def monoid_route():
    """Formes canoniques (et table de composition si table=1)"""
    mode = request.args.get('mode', GENERAL)
    if mode not in MODES:
        return jsonify({'error': f"Mode inconnu: {mode}"}), 400
    max_len = request.args.get('max_len', type=int)
    if request.args.get('table') == '1':
        return jsonify(monoid_table(mode, max_len).to_dict())
    words = [str(w) for w in enumerate_canonical(mode, max_len)]
    return jsonify({'mode': mode, 'count': len(words), 'words': words})


@app.route('/api/separate', methods=['POST'])
def separate_route():
    """Sépare S et T donnés en représentation H"""
    data = _payload()
    if 's' not in data or 't' not in data:
        return jsonify({'error': "Champs 's' et 't' requis"}), 400
    s = ConvexHRep.from_json(data['s'])
    t = ConvexHRep.from_json(data['t'])
    outcome = separate(s, t)

    kind = 'certificate' if isinstance(outcome, SeparationCertificate) else 'intersects'
    result = {'outcome': kind, **outcome.to_dict()}
    entry = RunHistory.record('separate', result, source=str({'s': data['s'], 't': data['t']}))
    return jsonify({'success': True, 'history_id': entry.id, **result})


@app.route('/api/selftest', methods=['POST'])
@require_admin
def selftest_route():
    """Lance l'autotest à la demande"""
    data = request.get_json(silent=True) or {}
    seeds = int(data.get('seeds', app.config.get('SELFTEST_SEEDS')))
    summary = SelftestService(seeds, resolve_rng_seed(data.get('rng'))).run()

    result = summary.to_dict()
    entry = RunHistory.record('selftest', result, verdict='PASS' if summary.passed else 'FAIL',
                              exit_code=0 if summary.passed else 1)
    return jsonify({'success': summary.passed, 'history_id': entry.id, **result})


# =============================================================================
# ROUTES - HISTORIQUE
# =============================================================================

@app.route('/api/history', methods=['GET'])
def get_history():
    """Récupère l'historique des exécutions"""
    limit = request.args.get('limit', 20, type=int)
    kind = request.args.get('kind')

    query = RunHistory.query
    if kind:
        query = query.filter_by(kind=kind)
    history = query.order_by(RunHistory.created_at.desc(), RunHistory.id.desc()).limit(limit).all()

    return jsonify({
        'count': len(history),
        'history': [h.to_dict(include_report=False) for h in history]
    })


@app.route('/api/history/<int:history_id>', methods=['GET'])
def get_history_detail(history_id):
    """Récupère le rapport complet d'une exécution"""
    entry = db.get_or_404(RunHistory, history_id)
    return jsonify(entry.to_dict())


@app.route('/api/history/latest', methods=['GET'])
def get_latest():
    """Récupère la dernière exécution"""
    entry = RunHistory.query.order_by(RunHistory.created_at.desc(), RunHistory.id.desc()).first()

    if not entry:
        return jsonify({'message': 'Aucune exécution disponible'}), 404

    return jsonify(entry.to_dict())


# =============================================================================
# ROUTES - API AUTH (Mode Admin)
# =============================================================================

@app.route('/api/auth/check', methods=['GET'])
def check_auth():
    """
    Indique si un mot de passe admin est configuré et si le client est authentifié.
    """
    admin_password = app.config.get('ADMIN_PASSWORD')

    if not admin_password:
        return jsonify({
            'auth_required': False,
            'is_admin': True,
            'message': 'Pas de mot de passe configuré - accès complet'
        })

    token = request.headers.get('X-Admin-Token', '')
    return jsonify({
        'auth_required': True,
        'is_admin': token == admin_password
    })


@app.route('/api/auth/login', methods=['POST'])
def admin_login():
    """Vérifie le mot de passe admin et renvoie le jeton à conserver côté client"""
    admin_password = app.config.get('ADMIN_PASSWORD')

    if not admin_password:
        return jsonify({
            'success': True,
            'message': 'Pas de mot de passe requis'
        })

    data = request.get_json(silent=True) or {}
    if data.get('password', '') == admin_password:
        return jsonify({
            'success': True,
            'token': admin_password,
            'message': 'Connexion réussie'
        })
    return jsonify({
        'success': False,
        'message': 'Mot de passe incorrect'
    }), 401


# =============================================================================
# TÂCHE PLANIFIÉE - AUTOTEST NOCTURNE
# =============================================================================

def job_autotest():
    """Rejoue l'autotest chaque nuit et l'enregistre dans l'historique."""
    with app.app_context():
        logger.info("[%s] 🚀 Démarrage de l'autotest nocturne...", datetime.now())
        try:
            summary = SelftestService(app.config.get('SELFTEST_SEEDS')).run()
        except KuraError as exc:
            logger.error("❌ Autotest interrompu: %s", exc)
            return
        entry = RunHistory.record('selftest', summary.to_dict(),
                                  verdict='PASS' if summary.passed else 'FAIL',
                                  exit_code=0 if summary.passed else 1)
        logger.info("✅ Autotest enregistré (ID: %s)", entry.id)


scheduler = None

if app.config.get('SCHEDULER_ENABLED'):
    scheduler = BackgroundScheduler()

    # Chaque nuit à 3h00 UTC
    scheduler.add_job(
        job_autotest,
        CronTrigger(hour=3, minute=0),
        id='nightly_selftest',
        name='Autotest nocturne',
        replace_existing=True
    )

    # Démarrer le scheduler (fonctionne avec gunicorn en production)
    scheduler.start()
    logger.info("📅 Scheduler démarré - Autotest chaque nuit à 3h00 UTC")


# =============================================================================
# POINT D'ENTRÉE
# =============================================================================

if __name__ == '__main__':
    port = int(os.environ.get('PORT', 5000))
    app.run(host='0.0.0.0', port=port, debug=app.config.get('DEBUG', False))
