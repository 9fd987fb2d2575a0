"""Exact N-soliton solutions of the focusing NLS equation on two half-lines
coupled by an integrable defect, built by paired Darboux dressing."""

from defect_nls.config import settings

__version__ = settings.APP_VERSION
