"""Command-line front end.

Every command is a thin HTTP client of the service: by default requests go
through an in-process ASGI transport (no sockets), and --server redirects
them to a running instance, so both paths exercise the same JSON contract.

Exit codes: 0 success, 2 usage or bad input, 3 no run converged, 4 I/O.
"""
from __future__ import annotations

import asyncio
import json
import sys
from typing import Optional

import click
import httpx

from .errors import VvqeError
from .matrices import load_matrix, record_to_payload

EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4


def _request(server: Optional[str], method: str, path: str, payload=None) -> httpx.Response:
    if server:
        try:
            return httpx.request(method, server.rstrip("/") + path, json=payload, timeout=None)
        except httpx.HTTPError as exc:
            click.echo(f"error: cannot reach {server}: {exc}", err=True)
            sys.exit(EXIT_IO)

    from .service.app import create_app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service", timeout=None
        ) as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _check(resp: httpx.Response) -> dict:
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
        detail = body.get("detail", body)
    except ValueError:
        detail = resp.text
    click.echo(f"error: {detail}", err=True)
    sys.exit(EXIT_NO_CONVERGENCE if resp.status_code == 409 else EXIT_USAGE)


def _matrix_source(matrix: Optional[str], file: Optional[str]):
    if (matrix is None) == (file is None):
        click.echo("error: exactly one of --matrix or --file is required", err=True)
        sys.exit(EXIT_USAGE)
    if matrix is not None:
        return matrix
    try:
        record = load_matrix(file)
    except OSError as exc:
        click.echo(f"error: cannot read {file}: {exc}", err=True)
        sys.exit(EXIT_IO)
    except VvqeError as exc:
        click.echo(f"error: {file}: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    return record_to_payload(record)


def _emit(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _as_json(doc) -> str:
    # repr-based float formatting: shortest string that round-trips exactly
    return json.dumps(doc, indent=2)


def _parse_grid(grid: str) -> list:
    try:
        values = [float(tok) for tok in grid.split(",") if tok.strip()]
    except ValueError:
        click.echo(f"error: cannot parse grid {grid!r}", err=True)
        sys.exit(EXIT_USAGE)
    if not values:
        click.echo("error: grid must contain at least one angle", err=True)
        sys.exit(EXIT_USAGE)
    return values


def _options(starts, layers, seed, cluster_tol, shots, tol, max_iter) -> dict:
    opts = {"starts": starts, "seed": seed, "cluster_tol": cluster_tol}
    if layers is not None:
        opts["layers"] = layers
    if shots is not None:
        opts["shots"] = shots
    if tol is not None:
        opts["tol"] = tol
    if max_iter is not None:
        opts["max_iter"] = max_iter
    return opts


_matrix_opt = click.option("--matrix", help="builtin matrix name (see list-matrices)")
_file_opt = click.option("--file", help="path to a matrix JSON file")
_starts_opt = click.option("--starts", default=4, show_default=True, help="restarts per matrix dimension")
_layers_opt = click.option("--layers", type=int, default=None, help="entangling layers (default depends on size)")
_shots_opt = click.option("--shots", type=int, default=None, help="optimize on sampled expectations with this many shots")
_seed_opt = click.option("--seed", default=0, show_default=True, help="master random seed")
_tol_opt = click.option("--tol", type=float, default=None, help="optimizer cost-spread stopping tolerance")
_max_iter_opt = click.option("--max-iter", type=int, default=None, help="optimizer iteration cap")
_cluster_opt = click.option("--cluster-tol", default=1e-3, show_default=True, help="eigenvalue clustering radius")
_out_opt = click.option("--out", default=None, help="write the artifact to this path instead of stdout")


@click.group()
@click.option("--server", default=None, envvar="NONHERM_VVQE_SERVER",
              help="base URL of a running service (default: in-process)")
@click.pass_context
def main(ctx: click.Context, server: Optional[str]) -> None:
    """Recover complex spectra of non-Hermitian matrices by variance minimization."""
    ctx.obj = server


@main.command()
@_matrix_opt
@_file_opt
@_starts_opt
@_layers_opt
@_shots_opt
@_seed_opt
@_tol_opt
@_max_iter_opt
@_cluster_opt
@_out_opt
@click.pass_obj
def solve(server, matrix, file, starts, layers, shots, seed, tol, max_iter, cluster_tol, out):
    """Multi-start spectrum recovery; emits clustered eigenpairs as JSON."""
    payload = {
        "matrix": _matrix_source(matrix, file),
        "options": _options(starts, layers, seed, cluster_tol, shots, tol, max_iter),
    }
    doc = _check(_request(server, "POST", "/solve", payload))
    _emit(_as_json(doc), out)


@main.command()
@_matrix_opt
@_file_opt
@click.option("--grid", required=True, help="comma-separated initialization angles in radians")
@_starts_opt
@_layers_opt
@_shots_opt
@_seed_opt
@_tol_opt
@_max_iter_opt
@_cluster_opt
@_out_opt
@click.pass_obj
def sweep(server, matrix, file, grid, starts, layers, shots, seed, tol, max_iter, cluster_tol, out):
    """Optimize once per grid angle; emits CSV angle_rad,eig_re,eig_im,variance."""
    payload = {
        "matrix": _matrix_source(matrix, file),
        "grid": _parse_grid(grid),
        "options": _options(starts, layers, seed, cluster_tol, shots, tol, max_iter),
    }
    doc = _check(_request(server, "POST", "/sweep", payload))
    lines = ["angle_rad,eig_re,eig_im,variance"]
    for entry in doc["entries"]:
        z = entry["eigenvalue"]
        lines.append(
            f"{entry['init_angle']!r},{z['re']!r},{z['im']!r},{entry['variance']!r}"
        )
    _emit("\n".join(lines), out)


@main.command()
@_matrix_opt
@_file_opt
@click.option("--axes", default="reduced", show_default=True,
              help="'reduced' for the two-parameter single-qubit scan, or one or two comma-separated parameter indices")
@click.option("--resolution", default=101, show_default=True, help="grid points per axis over [0, 2pi]")
@_layers_opt
@_out_opt
@click.pass_obj
def landscape(server, matrix, file, axes, resolution, layers, out):
    """Cost grid over parameter axes; CSV theta1,theta2,cost or theta,cost,eig_re."""
    if resolution < 2:
        click.echo("error: --resolution must be at least 2", err=True)
        sys.exit(EXIT_USAGE)
    if axes.strip().lower() == "reduced":
        axes_spec = "REDUCED_2PARAM"
    else:
        try:
            indices = [int(tok) for tok in axes.split(",") if tok.strip()]
        except ValueError:
            click.echo(f"error: cannot parse axes {axes!r}", err=True)
            sys.exit(EXIT_USAGE)
        if len(indices) not in (1, 2):
            click.echo("error: --axes needs one or two parameter indices", err=True)
            sys.exit(EXIT_USAGE)
        axes_spec = indices
    payload = {
        "matrix": _matrix_source(matrix, file),
        "axes": axes_spec,
        "resolution": resolution,
    }
    if layers is not None:
        payload["layers"] = layers
    doc = _check(_request(server, "POST", "/landscape", payload))
    thetas = doc["thetas"]
    if doc["eig_real"] is not None:
        lines = ["theta,cost,eig_re"]
        for t, c, e in zip(thetas, doc["costs"], doc["eig_real"]):
            lines.append(f"{t!r},{c!r},{e!r}")
    else:
        lines = ["theta1,theta2,cost"]
        for i, row in enumerate(doc["costs"]):
            for j, c in enumerate(row):
                lines.append(f"{thetas[i]!r},{thetas[j]!r},{c!r}")
    _emit("\n".join(lines), out)


@main.command()
@_matrix_opt
@_file_opt
@_starts_opt
@_layers_opt
@_seed_opt
@_tol_opt
@_max_iter_opt
@_cluster_opt
@_out_opt
@click.pass_obj
def compare(server, matrix, file, starts, layers, seed, tol, max_iter, cluster_tol, out):
    """Variance minimization vs plain energy minimization, as a JSON report."""
    payload = {
        "matrix": _matrix_source(matrix, file),
        "options": _options(starts, layers, seed, cluster_tol, None, tol, max_iter),
    }
    doc = _check(_request(server, "POST", "/compare", payload))
    _emit(_as_json(doc), out)


@main.command()
@_matrix_opt
@_file_opt
@click.option("--vectors", is_flag=True, help="include eigenvectors and residuals")
@_out_opt
@click.pass_obj
def oracle(server, matrix, file, vectors, out):
    """Classical reference spectrum as JSON."""
    payload = {"matrix": _matrix_source(matrix, file), "want_vectors": vectors}
    doc = _check(_request(server, "POST", "/oracle", payload))
    _emit(_as_json(doc), out)


@main.command()
@_matrix_opt
@_file_opt
@click.option("--starts", default=5, show_default=True, help="number of traced runs")
@_layers_opt
@_shots_opt
@_seed_opt
@_tol_opt
@_max_iter_opt
@_out_opt
@click.pass_obj
def trace(server, matrix, file, starts, layers, shots, seed, tol, max_iter, out):
    """Per-iteration cost traces; CSV series,iteration,cost."""
    payload = {
        "matrix": _matrix_source(matrix, file),
        "runs": starts,
        "options": _options(4, layers, seed, 1e-3, shots, tol, max_iter),
    }
    doc = _check(_request(server, "POST", "/trace", payload))
    lines = ["series,iteration,cost"]
    for s, series in enumerate(doc["series"]):
        for point in series["points"]:
            lines.append(f"{s},{point['iteration']},{point['cost']!r}")
    _emit("\n".join(lines), out)


@main.command("list-matrices")
@click.pass_obj
def list_matrices(server):
    """Names and sizes of the builtin matrices."""
    doc = _check(_request(server, "GET", "/matrices"))
    for info in doc["matrices"]:
        kind = "hermitian" if info["hermitian"] else "non-hermitian"
        click.echo(f"{info['name']}\t{info['dim']}x{info['dim']}\t{kind}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
