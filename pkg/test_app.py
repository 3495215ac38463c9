# -*- coding: utf-8 -*-
"""
Tests de l'API REST
===================
Routes moteur, historique et protection admin (base SQLite en mémoire).
"""

import os
import unittest

os.environ['FLASK_ENV'] = 'testing'

from app import app  # noqa: E402
from models import RunHistory, db  # noqa: E402


class ApiTestCase(unittest.TestCase):

    def setUp(self):
        self.client = app.test_client()
        self.saved_password = app.config.get('ADMIN_PASSWORD')
        app.config['ADMIN_PASSWORD'] = None
        with app.app_context():
            RunHistory.query.delete()
            db.session.commit()

    def tearDown(self):
        app.config['ADMIN_PASSWORD'] = self.saved_password


class TestEngineRoutes(ApiTestCase):
    """Scripts, orbites, monoïde et séparation."""

    def test_run_script(self):
        response = self.client.post('/api/run', json={'source': "let A = seg(0, 1, 'co');\nshow cor(A);"})
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['exit_code'], 0)
        self.assertEqual(data['statements'][1]['kind'], 'show')
        self.assertIn('(0, 1)', data['text'])

    def test_run_syntax_error(self):
        response = self.client.post('/api/run', json={'source': 'let A = ;'})
        self.assertEqual(response.status_code, 400)
        data = response.get_json()
        self.assertEqual((data['line'], data['column'], data['exit_code']), (1, 9, 2))
        self.assertEqual(data['type'], 'DslSyntaxError')

    def test_run_requires_json(self):
        response = self.client.post('/api/run', data='pas du json')
        self.assertEqual(response.status_code, 400)

    def test_orbit(self):
        response = self.client.post('/api/orbit', json={'expr': "seg(0, 1, 'co')"})
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.get_json()['size'], 6)

    def test_monoid(self):
        data = self.client.get('/api/monoid?mode=convex').get_json()
        self.assertEqual(data['count'], 8)
        table = self.client.get('/api/monoid?mode=convex&table=1').get_json()
        self.assertTrue(table['closed'])
        self.assertEqual(self.client.get('/api/monoid?mode=other').status_code, 400)
        self.assertEqual(self.client.get('/api/monoid?max_len=2').status_code, 400)

    def test_separate(self):
        square = {'dim': 2, 'constraints': [[1, 0, '>=', 0], [1, 0, '<=', 1], [0, 1, '>=', 0], [0, 1, '<=', 1]]}
        point = {'dim': 2, 'constraints': [[1, 0, '=', 2], [0, 1, '=', 0]]}
        data = self.client.post('/api/separate', json={'s': square, 't': point}).get_json()
        self.assertEqual(data['outcome'], 'certificate')
        self.assertEqual(data['l'], ['1', '0'])
        self.assertTrue(data['checked'])
        inside = {'dim': 2, 'constraints': [[1, 0, '=', '1/2'], [0, 1, '=', '1/2']]}
        data = self.client.post('/api/separate', json={'s': square, 't': inside}).get_json()
        self.assertEqual(data['outcome'], 'intersects')
        self.assertEqual(data['point'], ['1/2', '1/2'])

    def test_separate_precondition(self):
        segment = {'dim': 2, 'constraints': [[0, 1, '=', 0]]}
        response = self.client.post('/api/separate', json={'s': segment, 't': segment})
        self.assertEqual(response.status_code, 400)
        self.assertIn('cor-nonempty', response.get_json()['error'])


class TestHistory(ApiTestCase):
    """Historique des exécutions."""

    def test_history_records_runs(self):
        self.assertEqual(self.client.get('/api/history/latest').status_code, 404)
        self.client.post('/api/run', json={'source': 'show space;'})
        self.client.post('/api/orbit', json={'expr': 'pt(0)'})

        listing = self.client.get('/api/history').get_json()
        self.assertEqual(listing['count'], 2)
        self.assertNotIn('report', listing['history'][0])
        self.assertEqual(self.client.get('/api/history?kind=run').get_json()['count'], 1)

        latest = self.client.get('/api/history/latest').get_json()
        self.assertEqual(latest['kind'], 'orbit')
        detail = self.client.get(f"/api/history/{latest['id']}").get_json()
        self.assertEqual(detail['report']['size'], 4)

    def test_unknown_entry(self):
        self.assertEqual(self.client.get('/api/history/9999').status_code, 404)


class TestAdmin(ApiTestCase):
    """Protection de l'autotest."""

    def test_selftest_open_without_password(self):
        response = self.client.post('/api/selftest', json={'seeds': 2, 'rng': 5})
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.get_json()['success'])

    def test_selftest_requires_token(self):
        app.config['ADMIN_PASSWORD'] = 'secret'
        self.assertEqual(self.client.post('/api/selftest', json={'seeds': 1}).status_code, 401)
        self.assertFalse(self.client.get('/api/auth/check').get_json()['is_admin'])
        login = self.client.post('/api/auth/login', json={'password': 'secret'}).get_json()
        self.assertEqual(login['token'], 'secret')
        checked = self.client.get('/api/auth/check', headers={'X-Admin-Token': 'secret'}).get_json()
        self.assertTrue(checked['is_admin'])
        self.assertEqual(self.client.post('/api/auth/login', json={'password': 'faux'}).status_code, 401)


if __name__ == '__main__':
    unittest.main(verbosity=2)
