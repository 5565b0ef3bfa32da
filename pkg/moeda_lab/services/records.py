"""
CSV 产物：扫描记录、运行轨迹、小生境保持概率、增长率曲线等

所有浮点数按 6 位有效数字输出，输出到文件时原子替换；路径为 "-" 时写标准输出。
"""

import csv
import io
import math
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path

from pydantic import ValidationError

from moeda_lab.base.exceptions import InvalidArgumentError, OutputError
from moeda_lab.base.i18n import CliI18n
from moeda_lab.services.engine import PointProbability, TraceRow
from moeda_lab.services.sizing_lab import GrowthRow, SweepRecord
from moeda_lab.utils.logger import get_logger
from moeda_lab.utils.tiny_func import atomic_write_text, format_float

logger = get_logger(__name__)

STDOUT = "-"

SWEEP_HEADER = (
    "kind",
    "m",
    "k",
    "d",
    "m_d",
    "ell",
    "algo",
    "replacement",
    "mode",
    "n_min_mean",
    "n_min_std",
    "evals_mean",
    "evals_std",
    "repeats",
    "master_seed",
)
TRACE_HEADER = ("generation", "coverage", "points_covered")
NICHE_HEADER = ("index", "f1", "f2", "probability", "n", "runs", "master_seed")
GROWTH_HEADER = ("k", "m", "m_d", "m_d_exact")
EVALUATE_HEADER = ("genome", "f1", "f2")
ORACLE_HEADER = ("type", "genome", "f1", "f2")
PREDICT_HEADER = (
    "k",
    "m",
    "n_eda",
    "m_d",
    "m_d_exact",
    "n_opt",
    "n_niching_exact",
    "n_niching_approx",
    "log_base",
)
RUN_HEADER = (
    "success",
    "g_star",
    "generations_run",
    "evaluations",
    "evaluations_to_coverage",
    "final_coverage",
    "n",
    "seed",
)

type Cell = str | int | float | bool | None


def format_cell(value: Cell) -> str:
    """单元格格式化：None 为空串，浮点数取 6 位有效数字"""
    match value:
        case None:
            return ""
        case bool():
            return "1" if value else "0"
        case float():
            return format_float(value)
        case _:
            return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> str:
    """渲染 CSV 文本（换行固定为 \\n，保证逐字节可复现）"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


def write_output(text: str, out: str | Path) -> None:
    """写出产物

    :param text: 文本内容
    :param out: 输出路径，"-" 表示标准输出
    :raises OutputError: 目标不可写
    """
    if str(out) == STDOUT:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    try:
        atomic_write_text(path, text)
    except OSError as e:
        raise OutputError(
            CliI18n.OUTPUT_UNWRITABLE, data=str(path), path=str(path), error=str(e)
        ) from e
    logger.info("已写入 %s", path)


def read_csv_rows(text: str, header: Sequence[str]) -> list[dict[str, str]]:
    """按固定表头读取 CSV

    :raises InvalidArgumentError: 表头不匹配
    """
    reader = csv.reader(io.StringIO(text))
    actual = next(reader, [])
    if tuple(actual) != tuple(header):
        raise InvalidArgumentError(CliI18n.CSV_HEADER_MISMATCH, header=",".join(actual))
    return [dict(zip(header, row, strict=True)) for row in reader if row]


def _parse_float(text: str) -> float:
    return math.nan if text == "" else float(text)


def render_sweep_csv(records: Iterable[SweepRecord]) -> str:
    return render_csv(
        SWEEP_HEADER,
        (
            (
                r.kind,
                r.m,
                r.k,
                r.d,
                r.m_d,
                r.ell,
                r.algo,
                r.replacement,
                r.mode,
                r.n_min_mean,
                r.n_min_std,
                r.evals_mean,
                r.evals_std,
                r.repeats,
                r.master_seed,
            )
            for r in records
        ),
    )


def write_sweep_csv(records: Iterable[SweepRecord], out: str | Path) -> None:
    write_output(render_sweep_csv(records), out)


def parse_sweep_csv(text: str) -> list[SweepRecord]:
    """解析扫描 CSV 文本，数值精度为输出时的 6 位有效数字"""
    records = []
    for line, row in enumerate(read_csv_rows(text, SWEEP_HEADER), start=2):
        try:
            records.append(
                SweepRecord(
                    kind=row["kind"],
                    m=int(row["m"]),
                    k=int(row["k"]),
                    d=None if row["d"] == "" else float(row["d"]),
                    m_d=int(row["m_d"]),
                    ell=int(row["ell"]),
                    algo=row["algo"],
                    replacement=row["replacement"],
                    mode=row["mode"],
                    n_min_mean=_parse_float(row["n_min_mean"]),
                    n_min_std=_parse_float(row["n_min_std"]),
                    evals_mean=_parse_float(row["evals_mean"]),
                    evals_std=_parse_float(row["evals_std"]),
                    repeats=int(row["repeats"]),
                    master_seed=int(row["master_seed"]),
                )
            )
        except (ValueError, ValidationError) as e:
            raise InvalidArgumentError(
                CliI18n.INVALID_VALUE, data=line, field=f"line {line}", error=str(e)
            ) from e
    return records


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    return parse_sweep_csv(Path(path).read_text(encoding="utf-8"))


def render_trace_csv(rows: Iterable[TraceRow]) -> str:
    return render_csv(
        TRACE_HEADER, ((r.generation, r.coverage, r.points_covered) for r in rows)
    )


def render_niche_csv(
    rows: Iterable[PointProbability], n: int, runs: int, master_seed: int
) -> str:
    return render_csv(
        NICHE_HEADER,
        ((r.index, r.f1, r.f2, r.probability, n, runs, master_seed) for r in rows),
    )


def render_growth_csv(rows: Iterable[GrowthRow]) -> str:
    return render_csv(GROWTH_HEADER, ((r.k, r.m, r.m_d, r.m_d_exact) for r in rows))
