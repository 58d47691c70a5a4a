"""Price ingestion, log-returns, sample moments, and synthetic universes.

Input format is long-form CSV with header ``date,ticker,close``. Assets with
an incomplete history are dropped (never imputed), then any date still
missing a price for a surviving asset is dropped as well, so the final panel
is dense. Asset ordering is lexicographic by ticker everywhere.
"""

from __future__ import annotations

import csv
import datetime as _dt
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class PricePanel:
    """Dense close-price panel: ``prices[t, i]`` is the price of ``tickers[i]``
    on ``dates[t]``."""

    tickers: list[str]
    dates: list[str]
    prices: np.ndarray

    def __post_init__(self):
        t, n = self.prices.shape
        if t != len(self.dates) or n != len(self.tickers):
            raise DataError("price matrix shape does not match dates/tickers")
        if not np.all(self.prices > 0):
            raise DataError("prices must be strictly positive")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise DataError("dates must be strictly increasing")

    @property
    def n_assets(self) -> int:
        return len(self.tickers)


@dataclass(frozen=True)
class ReturnsPanel:
    """Daily log-returns with sample moments.

    ``mu`` and ``cov`` are the sample mean and sample covariance
    (divisor T_obs - 1); ``corr`` is the correlation matrix with an exact
    unit diagonal.
    """

    tickers: list[str]
    returns: np.ndarray
    mu: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)
    corr: np.ndarray = field(repr=False)

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    @property
    def t_obs(self) -> int:
        return self.returns.shape[0]


def _moments(returns: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mu = returns.mean(axis=0)
    cov = np.cov(returns, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    sd = np.sqrt(np.diag(cov))
    if np.any(sd == 0):
        raise DataError("degenerate asset: constant price series (zero variance)")
    corr = cov / np.outer(sd, sd)
    np.fill_diagonal(corr, 1.0)
    return mu, cov, corr


def returns_panel(tickers: list[str], returns: np.ndarray) -> ReturnsPanel:
    """Build a ReturnsPanel from a raw return matrix, computing moments."""
    mu, cov, corr = _moments(returns)
    return ReturnsPanel(list(tickers), returns, mu, cov, corr)


def load_prices(path: str | Path, min_history_fraction: float = 0.95) -> PricePanel:
    """Parse a ``date,ticker,close`` CSV into a dense PricePanel.

    Assets present on fewer than ``min_history_fraction`` of all dates are
    dropped; remaining dates with any gap are dropped afterwards.  Raises
    DataError with the offending line number on parse failures and when no
    asset survives the completeness filter.
    """
    if not 0 < min_history_fraction <= 1:
        raise DataError("min_history_fraction must be in (0, 1]")
    path = Path(path)
    if not path.exists():
        raise DataError(f"price file not found: {path}")

    cells: dict[tuple[str, str], float] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if [c.strip().lower() for c in header] != ["date", "ticker", "close"]:
            raise DataError(f"{path} line 1: expected header 'date,ticker,close'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise DataError(f"{path} line {lineno}: expected 3 columns, got {len(row)}")
            date_s, ticker, close_s = (c.strip() for c in row)
            try:
                _dt.date.fromisoformat(date_s)
            except ValueError:
                raise DataError(f"{path} line {lineno}: bad date {date_s!r}") from None
            if not ticker:
                raise DataError(f"{path} line {lineno}: empty ticker")
            try:
                close = float(close_s)
            except ValueError:
                raise DataError(f"{path} line {lineno}: bad price {close_s!r}") from None
            if not np.isfinite(close) or close <= 0:
                raise DataError(f"{path} line {lineno}: price must be positive, got {close_s}")
            key = (date_s, ticker)
            if key in cells:
                raise DataError(f"{path} line {lineno}: duplicate (date, ticker) {key}")
            cells[key] = close

    all_dates = sorted({d for d, _ in cells})
    all_tickers = sorted({t for _, t in cells})
    if not all_dates:
        raise DataError(f"{path}: no data rows")

    kept = [
        t
        for t in all_tickers
        if sum((d, t) in cells for d in all_dates) / len(all_dates) >= min_history_fraction
    ]
    if not kept:
        raise DataError("empty universe: no asset meets the completeness threshold")

    dense_dates = [d for d in all_dates if all((d, t) in cells for t in kept)]
    if not dense_dates:
        raise DataError("empty universe: no date has a complete cross-section")

    prices = np.array([[cells[(d, t)] for t in kept] for d in dense_dates], dtype=float)
    return PricePanel(kept, dense_dates, prices)


def to_returns(panel: PricePanel) -> ReturnsPanel:
    """Daily log-returns r[t] = ln(p[t+1]/p[t]) plus sample moments."""
    if len(panel.dates) < 3:
        raise DataError("need at least 3 dates to form a returns panel")
    rets = np.log(panel.prices[1:] / panel.prices[:-1])
    return returns_panel(panel.tickers, rets)


def synth_universe(
    n: int,
    t_obs: int,
    n_blocks: int,
    intra_rho: float,
    seed: int,
    market_rho: float = 0.0,
) -> ReturnsPanel:
    """Synthetic daily-return universe with planted block correlation.

    Asset i belongs to block ``i // (n // n_blocks)``.  Within-block
    correlation is ``intra_rho + market_rho``; across blocks it is
    ``market_rho`` (a common mode shared by all assets, off by default).
    Bitwise deterministic for a fixed seed.
    """
    if n <= 0 or t_obs < 3 or n_blocks <= 0:
        raise DataError("n, t_obs, n_blocks must be positive (t_obs >= 3)")
    if n % n_blocks != 0:
        raise DataError("n must be divisible by n_blocks")
    if not 0 <= intra_rho < 1:
        raise DataError("intra_rho must be in [0, 1)")
    if not 0 <= market_rho < 1 or intra_rho + market_rho >= 1:
        raise DataError("market_rho must satisfy 0 <= market_rho, intra_rho + market_rho < 1")

    rng = np.random.default_rng(seed)
    block = np.arange(n) // (n // n_blocks)
    factors = rng.standard_normal((t_obs, n_blocks))
    market = rng.standard_normal((t_obs, 1))
    noise = rng.standard_normal((t_obs, n))
    raw = (
        np.sqrt(market_rho) * market
        + np.sqrt(intra_rho) * factors[:, block]
        + np.sqrt(1.0 - intra_rho - market_rho) * noise
    )
    vol = rng.uniform(0.008, 0.025, size=n)
    drift = rng.normal(4e-4, 6e-4, size=n)
    rets = drift + vol * raw
    tickers = [f"S{i:04d}" for i in range(n)]
    return returns_panel(tickers, rets)
