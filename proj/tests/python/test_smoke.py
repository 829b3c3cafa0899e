import pytest

import freer_arrows as fa


def test_program_construction_and_count():
    p = fa.get_state() | fa.Program.hom(lambda x: x + 1) | fa.put_state()
    assert p.count() == 2
    assert p.validate()
    assert p.stages() == ["GetS", "PutS"]
    assert p.render() == "Stage0: GetS\nStage1: PutS\nTerminal\n"


def test_state_interpretation():
    p = fa.get_state() | fa.Program.hom(lambda x: x + 1) | fa.put_state()
    out, state = fa.run_state(p, None, 41)
    assert out == 42
    assert state == 42


def test_pure_programs_and_python_functions():
    p = fa.Program.hom(lambda x: x * 2) | fa.Program.hom(lambda x: x + 1)
    assert p.count() == 0
    assert fa.run_pure(p, 3) == 7


def test_choice_routing_with_python_predicates():
    tag = fa.Program.hom(lambda x: fa.Left(x) if x > 0 else fa.Right(x))
    untag = fa.Program.hom(lambda e: e.value)
    p = tag | (fa.get_state() | fa.Program.hom(lambda x: x + 100)).left() | untag
    out, state = fa.run_state(p, 5, 7)
    assert out == 107  # effect fired: state read, then +100
    out, state = fa.run_state(p, -5, 7)
    assert out == -5  # bypassed untouched


def test_forward_if_branches():
    p = fa.forward_if("u1", "u2", "u3", [], "m1", "m2")
    assert p.count() == 3
    r = fa.run_web(p, {("u1", ()): "5"})
    assert r["posts"] == [("u2", [], "m1")]
    r = fa.run_web(p, {("u1", ()): "-3"})
    assert r["posts"] == [("u3", [], "m2")]


def test_projection_and_analysis():
    echo = fa.choreography("echo")
    assert sorted(fa.participants(echo)) == ["client", "server"]
    at_client = fa.epp(echo, "client")
    assert fa.collect(at_client) == ["LocalStep", "Sent(server)", "Received(server)"]
    assert fa.partners(at_client) == ["server"]

    kvs = fa.choreography("kvs")
    assert fa.broadcast_targets(fa.epp(kvs, "primary")) == [["backup"]]
    assert fa.partners(fa.epp(kvs, "client")) == ["primary"]


def test_run_mem_echo():
    r = fa.run_mem(fa.choreography("echo"), {"client": ["hello"]})
    assert r["outputs"]["client"] == [fa.Located("client", "hello")]
    assert r["outputs"]["client"][0].payload == "hello"


def test_run_mem_kvs_two_rounds():
    r = fa.run_mem(fa.choreography("kvs"), {"client": ["Put k v", "Get k"]}, rounds=2)
    payloads = [v.payload for v in r["outputs"]["client"]]
    assert payloads == ["Ack", "v"]
    assert r["stores"]["primary"] == {"k": "v"}
    assert r["stores"]["backup"] == {"k": "v"}
    received = [e for e in r["traces"]["client"] if e.startswith("Received")]
    assert len(received) == 2


def test_countdown():
    r = fa.countdown(5)
    assert r == {"final_state": 0, "gets": 6, "puts": 5}
    with pytest.raises(fa.FreerError):
        fa.countdown(-1, cap=10)


def test_errors_are_typed():
    with pytest.raises(fa.FreerError):
        fa.choreography("nosuch")
    with pytest.raises(fa.FreerError):
        fa.run_mem(fa.choreography("echo"), {"nobody": ["x"]})
