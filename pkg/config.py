# -*- coding: utf-8 -*-
"""
Configuration du moteur Kuratowski
==================================
Paramètres du moteur (capacité, dimension, graine aléatoire) et de
l'API web, chargés depuis les variables d'environnement.
"""

import logging
import os
from dotenv import load_dotenv

# Charger les variables d'environnement depuis .env (en local)
load_dotenv()


class Config:
    """Configuration de base"""

    # ==========================================================================
    # SECRETS
    # ==========================================================================

    # Clé secrète Flask pour les sessions
    SECRET_KEY = os.environ.get('SECRET_KEY', 'dev-secret-key-change-in-production')

    # Mot de passe admin (autotest à la demande). Non défini = accès libre
    ADMIN_PASSWORD = os.environ.get('ADMIN_PASSWORD')

    # ==========================================================================
    # BASE DE DONNÉES (historique des exécutions)
    # ==========================================================================

    DATABASE_URL = os.environ.get('DATABASE_URL', 'sqlite:///kuratowski.db')

    # Render fournit postgres:// au lieu de postgresql://
    if DATABASE_URL and DATABASE_URL.startswith('postgres://'):
        DATABASE_URL = DATABASE_URL.replace('postgres://', 'postgresql://', 1)

    SQLALCHEMY_DATABASE_URI = DATABASE_URL
    SQLALCHEMY_TRACK_MODIFICATIONS = False

    # ==========================================================================
    # PARAMÈTRES DU MOTEUR
    # ==========================================================================

    # Nombre maximal de droites d'un arrangement (après déduplication)
    MAX_LINES = int(os.environ.get('KURA_MAX_LINES', 64))

    # Dimension par défaut des scripts sans constructeur de forme
    DEFAULT_DIM = 2

    # Graine par défaut des générateurs aléatoires (écrasée par KURA_RNG)
    DEFAULT_RNG = 42

    # Nombre de graines de l'autotest
    SELFTEST_SEEDS = 500

    # Graines convexes par graine d'autotest pour le maximum d'orbite (500 -> 10 000)
    CONVEX_MAX_FACTOR = 20

    # Longueur maximale des mots énumérés par le réécrivain
    MONOID_MAX_LEN = 9

    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')

    # Autotest planifié chaque nuit
    SCHEDULER_ENABLED = os.environ.get('SCHEDULER_ENABLED', '1') == '1'


class DevelopmentConfig(Config):
    """Configuration pour le développement local"""
    DEBUG = True


class ProductionConfig(Config):
    """Configuration pour la production (Render)"""
    DEBUG = False


class TestingConfig(Config):
    """Configuration des tests (base en mémoire, pas de planificateur)"""
    TESTING = True
    DEBUG = False
    SQLALCHEMY_DATABASE_URI = 'sqlite://'
    SCHEDULER_ENABLED = False
    SELFTEST_SEEDS = 20


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Retourne la configuration appropriée selon l'environnement"""
    env = os.environ.get('FLASK_ENV', 'development')
    return config.get(env, config['default'])


def resolve_rng_seed(default=None):
    """
    Graine effective: KURA_RNG si défini, sinon la valeur fournie.

    Args:
        default: graine demandée (--rng), None = Config.DEFAULT_RNG

    Returns:
        int
    """
    override = os.environ.get('KURA_RNG')
    if override not in (None, ''):
        return int(override)
    return Config.DEFAULT_RNG if default is None else int(default)


def configure_logging(level=None):
    """Configure le logging racine une seule fois."""
    level = level or get_config().LOG_LEVEL
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s %(levelname)s [%(name)s] %(message)s'
    )
