"""Scenario-to-result bindings and their audit."""
import copy

from cnp_lab.bindings import audit_bindings, builtin_documents, render_markdown
from cnp_lab.cli import main


def test_full_set_is_complete():
    rep = audit_bindings()
    assert rep.bindings == 10 and rep.missing == [] and rep.errors == [] and rep.ok


def test_missing_binding_reported():
    docs = copy.deepcopy(builtin_documents())
    docs["schur-square"]["binding"] = None
    rep = audit_bindings(docs)
    assert rep.missing == ["schur-square"] and rep.bindings == 9


def test_dangling_check_reported():
    docs = copy.deepcopy(builtin_documents())
    docs["chu-dirichlet"]["binding"]["hypotheses"][0]["check"] = "no-such-check"
    assert len(audit_bindings(docs).errors) == 1


def test_dangling_op_reported():
    docs = copy.deepcopy(builtin_documents())
    docs["chu-dirichlet"]["checks"][5]["op"] = "frobnicate"  # the "contractive" check
    rep = audit_bindings(docs)
    assert any("unknown op" in e for e in rep.errors)


def test_assumed_hypotheses_listed():
    assert any(u.startswith("schur-square") for u in audit_bindings().unchecked)


def test_markdown_table(capsys):
    md = render_markdown()
    assert md.count("\n") == 12
    assert main(["bindings", "--markdown"]) == 0
    assert capsys.readouterr().out == md
