# -*- coding: utf-8 -*-
"""
Modèles de base de données
==========================
Historique des exécutions (scripts, orbites, séparations, autotests).
"""

import json
import logging
from datetime import datetime

from flask_sqlalchemy import SQLAlchemy

logger = logging.getLogger(__name__)

db = SQLAlchemy()


class RunHistory(db.Model):
    """
    Table de l'historique des exécutions.
    Chaque ligne garde le source soumis et le rapport JSON produit.
    """
    __tablename__ = 'run_history'

    id = db.Column(db.Integer, primary_key=True)
    kind = db.Column(db.String(20), nullable=False)  # run, orbit, separate, selftest
    created_at = db.Column(db.DateTime, default=datetime.utcnow)
    verdict = db.Column(db.String(10))  # PASS / FAIL, None si sans objet
    exit_code = db.Column(db.Integer, default=0)
    source = db.Column(db.Text)
    report_json = db.Column(db.Text)

    @classmethod
    def record(cls, kind, report, source=None, verdict=None, exit_code=0):
        """Enregistre une exécution et retourne la ligne créée."""
        entry = cls(
            kind=kind,
            verdict=verdict,
            exit_code=exit_code,
            source=source,
            report_json=json.dumps(report, ensure_ascii=False),
        )
        db.session.add(entry)
        db.session.commit()
        return entry

    @property
    def report(self):
        return json.loads(self.report_json) if self.report_json else None

    def to_dict(self, include_report=True):
        data = {
            'id': self.id,
            'kind': self.kind,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'verdict': self.verdict,
            'exit_code': self.exit_code,
            'source': self.source,
        }
        if include_report:
            data['report'] = self.report
        return data


def init_db(app):
    """
    Crée les tables si nécessaire.

    Args:
        app: Instance Flask
    """
    with app.app_context():
        db.create_all()
        logger.info("✅ Base de données prête (%s)", db.engine.dialect.name)
