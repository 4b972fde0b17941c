#!/usr/bin/env python3
"""Convert gate-level Verilog netlists shipped with the `circuitgraph` package
(MIT license, https://github.com/circuitgraph/circuitgraph) into bench text.

The circuitgraph copies of the ISCAS-85 circuits were re-emitted by a synthesis
tool: wide gates were split into AND/OR trees and equivalent inverters were
merged. Those files are written as `<name>_resyn.bench`; they are functionally
equivalent to the originals but have different gate counts.

For c432 the differences are small enough to undo: the four 9-input ANDs are
re-collapsed and the five merged duplicate inverters are restored, giving the
original 36/7/160 structure (written as `c432.bench`).

usage: import_circuitgraph.py <netlists-dir> <out-dir>
"""
import collections
import pathlib
import re
import sys


def parse_verilog(path):
    text = re.sub(r"//.*", "", pathlib.Path(path).read_text())
    inputs, outputs, gates = [], [], []
    for stmt in text.split(";"):
        stmt = " ".join(stmt.split())
        m = re.match(r"^(?:module\s+\S+\s*\(.*\)\s*)?(input|output)\s+(.*)$", stmt)
        if m:
            names = [x.strip() for x in m.group(2).split(",")]
            (inputs if m.group(1) == "input" else outputs).extend(names)
            continue
        m = re.match(r"^(and|nand|or|nor|xor|xnor|not|buf)\s+(\S+)\s*\((.*)\)$", stmt)
        if m:
            pins = [x.strip() for x in m.group(3).split(",")]
            gates.append({"kind": m.group(1).upper(), "inst": m.group(2),
                          "out": pins[0], "ins": pins[1:]})
            continue
        if stmt and not re.match(r"^(wire|module|endmodule)", stmt):
            raise ValueError(f"{path}: unsupported statement: {stmt[:60]}")
    inputs = [x for x in inputs if x != "clk"]
    return inputs, outputs, gates


def collapse_trees(gates):
    """Merge synthesis-introduced n_* intermediate AND/OR gates into their root."""
    by_out = {g["out"]: g for g in gates}
    uses = collections.Counter(i for g in gates for i in g["ins"])
    removed = set()
    for g in gates:
        if g["kind"] not in ("AND", "OR"):
            continue
        merged = []
        for i in g["ins"]:
            d = by_out.get(i)
            if (d is not None and i.startswith("n_") and d["kind"] == g["kind"]
                    and uses[i] == 1):
                merged.extend(d["ins"])
                removed.add(i)
            else:
                merged.append(i)
        g["ins"] = merged
    return [g for g in gates if g["out"] not in removed]


def restore_c432_inverters(gates):
    # (kept inverter output, {fanout kind: restored duplicate name})
    groups = [("N223", {"XOR": "N203", "NAND": "N213"}),
              ("N329", {"XOR": "N309", "NAND": "N319"}),
              ("N370", {"NAND": "N360"})]
    out = []
    for g in gates:
        out.append(g)
        for kept, dups in groups:
            if g["out"] == kept:
                for name in dups.values():
                    out.append({"kind": "NOT", "inst": name, "out": name,
                                "ins": list(g["ins"])})
    for g in out:
        for kept, dups in groups:
            if kept in g["ins"] and g["kind"] in dups:
                g["ins"] = [dups[g["kind"]] if i == kept else i for i in g["ins"]]
    return out


def write_bench(path, title, inputs, outputs, gates, note):
    lines = [f"# {title}", f"# {note}",
             f"# {len(inputs)} inputs, {len(outputs)} outputs, {len(gates)} gates", ""]
    lines += [f"INPUT({x})" for x in inputs] + [""]
    lines += [f"OUTPUT({x})" for x in outputs] + [""]
    lines += [f"{g['out']} = {g['kind']}({', '.join(g['ins'])})" for g in gates]
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


def main():
    src, dst = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    inputs, outputs, gates = parse_verilog(src / "c432.v")
    gates = restore_c432_inverters(collapse_trees(gates))
    kinds = collections.Counter(g["kind"] for g in gates)
    assert len(gates) == 160 and kinds == {"NAND": 79, "NOT": 40, "NOR": 19,
                                           "XOR": 18, "AND": 4}, kinds
    write_bench(dst / "c432.bench", "c432 (ISCAS-85)", inputs, outputs, gates,
                "reconstructed from the circuitgraph resynthesized netlist")
    for name in ("c499", "c880", "c1355", "c3540", "c6288"):
        inputs, outputs, gates = parse_verilog(src / f"{name}.v")
        write_bench(dst / f"{name}_resyn.bench", f"{name} (ISCAS-85, resynthesized)",
                    inputs, outputs, gates,
                    "functionally equivalent resynthesized variant from circuitgraph")


if __name__ == "__main__":
    main()
