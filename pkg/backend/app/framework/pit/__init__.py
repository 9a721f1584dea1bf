"""Pending Interest Table"""

from app.framework.pit.table import AdmitResult, DataResult, PendingInterestTable, PitEntry

__all__ = ["AdmitResult", "DataResult", "PendingInterestTable", "PitEntry"]
