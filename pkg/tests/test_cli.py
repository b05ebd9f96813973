import json

import pytest

from tcycle import fileio, generate
from tcycle.cli import main
from tcycle.errors import ParseError
from tcycle.treewidth import build, from_pace_lines, pace_lines


def write_instance(path, graph):
    fileio.dump(graph, str(path))
    return str(path)


def test_solve_yes_and_no(tmp_path, capsys):
    tri = write_instance(tmp_path / "tri.txt", generate.ring(3, terminals={1, 2, 3}))
    assert main(["solve", tri]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "YES" and out[1].split()

    path = write_instance(tmp_path / "p.txt", generate.path_graph(4, terminals={1, 4}))
    assert main(["solve", path]) == 1
    assert capsys.readouterr().out.strip() == "NO"


def test_solve_with_td_file(tmp_path, capsys):
    g = generate.grid(3, 3, terminals={1, 9})
    inst = write_instance(tmp_path / "g.txt", g)
    td_file = tmp_path / "td.txt"
    td_file.write_text("\n".join(pace_lines(build(g), len(g.vertices))) + "\n")
    assert main(["solve", inst, "--td", str(td_file)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "YES"


def test_missing_file_is_exit_2(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.txt")]) == 2
    assert "error" in capsys.readouterr().err


def test_reduce_writes_graph_and_report(tmp_path, capsys):
    depth = 6
    g = generate.nested_rings(depth)
    outer = generate.ring_ids(depth)[-1]
    g = g.with_terminals({outer[0], outer[1]})
    inst = write_instance(tmp_path / "in.txt", g)
    out = tmp_path / "out.txt"
    rep = tmp_path / "rep.json"
    assert main(["reduce", inst, str(out), "--g", "2", "--report", str(rep)]) == 0
    reduced = fileio.load(str(out))
    assert len(reduced.vertices) < len(g.vertices)
    payload = json.loads(rep.read_text())
    assert payload["input_size"] == len(g.vertices)
    assert payload["output_size"] == len(reduced.vertices)
    assert {r["vertex"] for r in payload["removed"]} == g.vertices - reduced.vertices


def test_kernelize_then_solve_matches(tmp_path, capsys):
    for seed in (3, 11, 27):
        g = generate.random_planar(12, seed=seed, k=3)
        inst = write_instance(tmp_path / f"in{seed}.txt", g)
        out = tmp_path / f"out{seed}.txt"
        rep = tmp_path / f"rep{seed}.json"
        assert main(["kernelize", inst, str(out), "--report", str(rep)]) == 0
        direct = main(["solve", inst])
        kerneled = main(["solve", str(out)])
        assert direct == kerneled
        payload = json.loads(rep.read_text())
        assert payload["final_size"] <= payload["input_size"]
        for cert in payload["replacements"]:
            assert cert["verified"] and cert["new_size"] < cert["old_size"]
    capsys.readouterr()


def test_td_output_round_trips(tmp_path, capsys):
    g = generate.grid(3, 4)
    inst = write_instance(tmp_path / "g.txt", g)
    assert main(["td", inst]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("s td ")
    td = from_pace_lines(lines)
    td.validate(g)


def test_from_pace_lines_errors():
    with pytest.raises(ParseError):
        from_pace_lines(["b 1 1 2"])
    with pytest.raises(ParseError):
        from_pace_lines(["s td 2 2 3", "b 1 1 2"])


def test_oracle_subcommands(tmp_path, capsys):
    tri = write_instance(tmp_path / "tri.txt", generate.ring(3, terminals={1, 2, 3}))
    assert main(["oracle", "t-cycle", tri]) == 0
    path = write_instance(tmp_path / "p.txt", generate.path_graph(4, terminals={1, 4}))
    assert main(["oracle", "t-cycle", path]) == 1
    assert main(["oracle", "disjoint-paths", path, "1", "4"]) == 0
    assert main(["oracle", "disjoint-paths", path, "1", "4", "2", "3"]) == 1
    capsys.readouterr()


def test_gen_deterministic_and_parseable(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    args = ["gen", "random-planar", "--n", "14", "--k", "3", "--seed", "9"]
    assert main(args + ["-o", str(a)]) == 0
    assert main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    g = fileio.load(str(a))
    assert len(g.vertices) == 14 and len(g.terminals) == 3


def test_gen_seed_from_environment(tmp_path, monkeypatch):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    monkeypatch.setenv("TCYCLE_SEED", "5")
    assert main(["gen", "random-planar", "--n", "10", "-o", str(a)]) == 0
    assert main(["gen", "random-planar", "--n", "10", "--seed", "5", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_roundtrip_on_generated_corpus():
    corpus = [
        generate.ring(5, terminals={1, 3}),
        generate.grid(3, 4, terminals={1, 12}),
        generate.nested_rings(3),
        generate.random_planar(10, seed=2, k=2),
        generate.digon_tower(3)[0],
    ]
    for g in corpus:
        h = fileio.parse(fileio.serialize(g))
        assert fileio.serialize(h) == fileio.serialize(g)
        assert (h.vertices, h.edges, h.terminals) == (g.vertices, g.edges, g.terminals)
        assert h.rotation == g.rotation


def test_parse_config(tmp_path):
    g, rings = generate.digon_tower(2)
    cycles = generate.ring_cycles(g, rings)
    text = fileio.serialize(g)
    for c in cycles[:2]:
        text += "cycle " + " ".join(map(str, sorted(c))) + "\n"
    loop = [e for e, (u, v) in g.edges.items() if u in (5, 6, 7) and v in (5, 6, 7)]
    text += "loop " + " ".join(map(str, sorted(loop[:3]))) + "\n"
    graph, cys, lp = fileio.parse_config(text)
    assert len(cys) == 2 and len(lp) == 3
    with pytest.raises(ParseError):
        fileio.parse_config(fileio.serialize(g))


def test_check_config_reports(tmp_path, capsys):
    g = generate.ring_gadget(3)
    rings = generate.ring_ids(4)
    cycles = generate.ring_cycles(g, rings[:3])
    t = max(g.vertices)
    outer = rings[3]
    pend = [e for e, (u, v) in g.edges.items() if t in (u, v)]
    arc = [e for e, (u, v) in g.edges.items() if u in outer and v in outer]
    drop = [e for e in arc if set(g.edges[e]) == {outer[0], outer[1]}]
    loop = (set(arc) - set(drop)) | set(pend)
    text = fileio.serialize(g)
    for c in cycles:
        text += "cycle " + " ".join(map(str, sorted(c))) + "\n"
    text += "loop " + " ".join(map(str, sorted(loop))) + "\n"
    conf = tmp_path / "conf.txt"
    conf.write_text(text)
    assert main(["check-config", str(conf)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["depth"] == 2 and payload["convex"]
    assert len(payload["levels"]) == 3
