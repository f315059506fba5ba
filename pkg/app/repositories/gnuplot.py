# app/repositories/gnuplot.py

from pathlib import Path


def emit_gnuplot(csv_path: str | Path, x: str, y: str, title: str | None = None) -> Path:
    """Writes <csv>.gp plotting column y against column x of the CSV."""
    csv_path = Path(csv_path)
    script = csv_path.with_suffix(".gp")
    script.write_text(
        "\n".join([
            "set datafile separator ','",
            "set datafile commentschars '#'",
            "set key autotitle columnhead",
            f"set title '{title or csv_path.stem}'",
            f"set xlabel '{x}'",
            f"set ylabel '{y}'",
            "set terminal pngcairo size 900,600",
            f"set output '{csv_path.with_suffix('.png').name}'",
            f"plot '{csv_path.name}' using '{x}':'{y}' with linespoints",
            "",
        ]),
        encoding="utf-8",
    )
    return script
