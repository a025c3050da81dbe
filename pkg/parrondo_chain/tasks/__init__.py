from .workers import SweepWorker

__all__ = ['SweepWorker']
