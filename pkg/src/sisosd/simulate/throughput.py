"""
Throughput model and least-effort iteration scheduling.

With one examined node per clock cycle, a detector spending E[N_en]
cycles per vector delivers r Q M_T f_clk / E[N_en] information bit/s.
"""

# Standard library imports
import logging
import math

# Local imports
import sisosd.utils.misc


def throughput(code_rate, q, mt, n_en, f_clk):
    if not n_en > 0:
        raise ValueError(f"Node count must be positive, not {n_en}")
    return code_rate * q * mt * f_clk / n_en


class ScheduleChoice(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, snr_db, iteration=None, l_e_max=None,
                 cumulative_n_en=math.nan, theta=math.nan):
        self.snr_db = snr_db
        self.iteration = iteration
        self.l_e_max = l_e_max
        self.cumulative_n_en = cumulative_n_en
        self.theta = theta

    @property
    def attained(self):
        return self.iteration is not None


class OperatingPoint(sisosd.utils.misc.AutoReprMixin):
    """Lowest SNR at which one (iteration, clipping) setting meets the target."""

    def __init__(self, iteration, l_e_max, snr_db=None,
                 cumulative_n_en=math.nan):
        self.iteration = iteration
        self.l_e_max = l_e_max
        self.snr_db = snr_db
        self.cumulative_n_en = cumulative_n_en

    @property
    def attained(self):
        return self.snr_db is not None


class Schedule(sisosd.utils.misc.AutoReprMixin):
    def __init__(self, target_fer, choices, operating_points, crossovers):
        self.target_fer = target_fer
        self.choices = choices
        self.operating_points = operating_points
        self.crossovers = crossovers

    def summary_lines(self):
        lines = [f"target_fer: {self.target_fer:g}"]
        for choice in self.choices:
            if choice.attained:
                lines.append(
                    f"schedule snr_db={choice.snr_db:g}: "
                    f"iterations={choice.iteration} "
                    f"l_e_max={choice.l_e_max:g} "
                    f"cumulative_n_en={choice.cumulative_n_en:.6g} "
                    f"theta_bps={choice.theta:.6g}")
            else:
                lines.append(
                    f"schedule snr_db={choice.snr_db:g}: unattained")
        for point in self.operating_points:
            if point.attained:
                lines.append(
                    f"min_snr iterations={point.iteration} "
                    f"l_e_max={point.l_e_max:g}: {point.snr_db:g} dB "
                    f"(cumulative_n_en={point.cumulative_n_en:.6g})")
            else:
                lines.append(
                    f"min_snr iterations={point.iteration} "
                    f"l_e_max={point.l_e_max:g}: unattained")
        for snr_db, previous, new in self.crossovers:
            lines.append(
                f"crossover snr_db={snr_db:g}: "
                f"iterations {previous} -> {new}")
        return lines


def least_effort_schedule(rows, target_fer):
    """Pick the cheapest setting meeting ``target_fer`` at every SNR.

    ``rows`` need ``snr_db``, ``iteration``, ``l_e_max``, ``fer``,
    ``cumulative_n_en`` and ``theta`` attributes. Ties in cost go to the
    fewer iterations, then the smaller clipping level.
    """
    logger = logging.getLogger(__name__)
    rows = list(rows)
    if not rows:
        raise ValueError("Cannot schedule without statistics")

    def cost_key(row):
        return (row.cumulative_n_en, row.iteration, row.l_e_max)

    choices = []
    for snr_db in sorted({row.snr_db for row in rows}):
        passing = [row for row in rows
                   if row.snr_db == snr_db and row.fer <= target_fer]
        if not passing:
            choices.append(ScheduleChoice(snr_db))
            continue
        best = min(passing, key=cost_key)
        choices.append(ScheduleChoice(
            snr_db,
            iteration=best.iteration,
            l_e_max=best.l_e_max,
            cumulative_n_en=best.cumulative_n_en,
            theta=best.theta,
            ))

    operating_points = []
    settings = sorted({(row.iteration, row.l_e_max) for row in rows})
    for iteration, l_e_max in settings:
        passing = [row for row in rows
                   if row.iteration == iteration and row.l_e_max == l_e_max
                   and row.fer <= target_fer]
        if not passing:
            operating_points.append(OperatingPoint(iteration, l_e_max))
            continue
        lowest = min(passing, key=lambda row: row.snr_db)
        operating_points.append(OperatingPoint(
            iteration, l_e_max, snr_db=lowest.snr_db,
            cumulative_n_en=lowest.cumulative_n_en))

    crossovers = []
    previous = None
    for choice in choices:
        if not choice.attained:
            continue
        if previous is not None and choice.iteration != previous.iteration:
            crossovers.append(
                (choice.snr_db, previous.iteration, choice.iteration))
        previous = choice

    if not any(choice.attained for choice in choices):
        logger.warning("Target FER %g not reached at any simulated SNR",
                       target_fer)
    return Schedule(target_fer, choices, operating_points, crossovers)
