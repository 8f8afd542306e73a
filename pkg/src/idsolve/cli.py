"""Command-line front end.

A thin client over the HTTP service: commands post the model document to
the service (in-process by default, or a remote instance via --server)
and render the responses.  Exit codes: 0 success, 1 validation failure,
2 solver error.
"""

from __future__ import annotations

import itertools
import json
import sys

import click

VALIDATION_EXIT = 1
SOLVER_EXIT = 2


class ServiceClient:
    """POSTs JSON payloads either in-process or to a remote server."""

    def __init__(self, server: str | None):
        self.server = server
        self._client = None

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        if self._client is None:
            if self.server:
                import httpx

                self._client = httpx.Client(base_url=self.server.rstrip("/"))
            else:
                from fastapi.testclient import TestClient

                from .service import app

                self._client = TestClient(app)
        response = self._client.post(path, json=payload)
        return response.status_code, response.json()


def _fail(body: dict) -> None:
    code = body.get("code", "ERROR")
    detail = body.get("detail", "request failed")
    click.echo(f"error {code}: {detail}", err=True)
    category = body.get("category", "solver")
    sys.exit(VALIDATION_EXIT if category == "validation" else SOLVER_EXIT)


def _read_model(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        click.echo(f"error MODEL_FILE: not valid JSON: {exc}", err=True)
        sys.exit(VALIDATION_EXIT)


def _parse_evidence(pairs: tuple[str, ...]) -> dict[str, str]:
    evidence = {}
    for pair in pairs:
        if "=" not in pair:
            click.echo(f"error EVIDENCE: expected VAR=OUTCOME, got {pair!r}", err=True)
            sys.exit(VALIDATION_EXIT)
        var, _, outcome = pair.partition("=")
        evidence[var] = outcome
    return evidence


@click.group()
@click.option(
    "--server",
    default=None,
    help="Base URL of a running service; runs in-process when omitted.",
)
@click.pass_context
def main(ctx, server):
    """Exact influence-diagram solver."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def validate(client: ServiceClient, model_file):
    """Check a model file and print the validation report."""
    status, body = client.post("/validate", {"model": _read_model(model_file)})
    if status != 200:
        _fail(body)
    for kind in ("errors", "warnings"):
        for issue in body[kind]:
            label = kind[:-1]
            ids = ",".join(issue["variables"])
            click.echo(f"{label} {issue['code']}: {issue['message']} [{ids}]")
    if body["ok"]:
        click.echo("ok")
        sys.exit(0)
    sys.exit(VALIDATION_EXIT)


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--method",
    type=click.Choice(["queries", "cluster", "onedir", "oracle"]),
    default="queries",
    show_default=True,
)
@click.option(
    "--mode",
    type=click.Choice(["rescaled", "valuation", "likelihood"]),
    default="rescaled",
    show_default=True,
    help="How the value enters the cluster/onedir backends.",
)
@click.option(
    "--evidence", multiple=True, metavar="VAR=OUTCOME", help="Extra observations."
)
@click.option("--full-information", is_flag=True, help="Policies over full history.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write a policy file.")
@click.option("--dot", type=click.Path(dir_okay=False), help="Write the rooted tree.")
@click.pass_obj
def solve(client: ServiceClient, model_file, method, mode, evidence, full_information, out, dot):
    """Solve a model: print MEV, MEU, evidence probability and policies."""
    doc = _read_model(model_file)
    observations = _parse_evidence(evidence)
    status, body = client.post(
        "/solve",
        {
            "model": doc,
            "method": method,
            "mode": mode,
            "evidence": observations,
            "full_information": full_information,
        },
    )
    if status != 200:
        _fail(body)

    click.echo(f"mev {body['mev']:.12g}")
    if body["meu"] is not None:
        click.echo(f"meu {body['meu']:.12g}")
    click.echo(f"evidence_probability {body['evidence_probability']:.12g}")
    outcome_lists = {
        v["id"]: v.get("outcomes") or [] for v in doc.get("variables", [])
    }
    for policy in body["policies"]:
        scope = policy["scope"]
        click.echo(f"policy {policy['decision']} | {','.join(scope) or '-'}")
        grids = [outcome_lists.get(v) or [] for v in scope]
        for config, choice in zip(
            itertools.product(*grids) if scope else [()], policy["choices"]
        ):
            key = ",".join(config) if config else "*"
            click.echo(f"  {key} -> {choice}")

    if out:
        document = {
            "mev": body["mev"],
            "meu": body["meu"],
            "evidence_probability": body["evidence_probability"],
            "policies": body["policies"],
        }
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    if dot:
        tree_mode = "rescaled" if mode == "rescaled" else "valuation"
        status, tree_body = client.post(
            "/tree", {"model": doc, "mode": tree_mode, "evidence": observations}
        )
        if status != 200:
            _fail(tree_body)
        with open(dot, "w", encoding="utf-8") as handle:
            handle.write(tree_body["dot"])
    sys.exit(0)


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def info(client: ServiceClient, model_file):
    """Print node counts, decision order and per-decision relevant scopes."""
    status, body = client.post("/info", {"model": _read_model(model_file)})
    if status != 200:
        _fail(body)
    click.echo(
        f"chance {body['chance']}  decisions {body['decisions']}  "
        f"values {body['values']}  combination {body['combination']}"
    )
    click.echo(f"decision_order {','.join(body['decision_order']) or '-'}")
    for var, outcome in sorted(body["evidence"].items()):
        click.echo(f"evidence {var}={outcome}")
    for detail in body["decision_details"]:
        click.echo(
            f"decision {detail['id']}: alternatives "
            f"{','.join(detail['alternatives'])}; information "
            f"{','.join(detail['information']) or '-'}; relevant "
            f"{','.join(detail['relevant']) or '-'}"
        )
    sys.exit(0)


if __name__ == "__main__":
    main()
