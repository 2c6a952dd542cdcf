import pytest

from conftest import EXAMPLE_SQUARE, FIG2_TEXT, FIG3_TEXT, L5X12
from xorcode import LatinRectangle, split_upper
from xorcode.cli import main

EXAMPLE_RECT = split_upper(EXAMPLE_SQUARE, 3)


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_writes_design(tmp_path, capsys):
    out = tmp_path / "design"
    code, stdout, _ = run(capsys, "gen", "-n", "4", "--auto", "--seed", "7", "-o", str(out))
    assert code == 0
    assert "n=4 k=3" in stdout and "nonsingular=true" in stdout
    rect = LatinRectangle.from_text((out / "rectangle.txt").read_text())
    assert rect.k == 3 and rect.n == 4
    assert (out / "incidence.txt").exists() and (out / "inverse.txt").exists()


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "gen", "-n", "6", "--seed", "3", "-o", str(a))
    run(capsys, "gen", "-n", "6", "--seed", "3", "-o", str(b))
    for name in ("rectangle.txt", "incidence.txt", "inverse.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_gen_even_k_is_domain_error(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "-n", "4", "-k", "2", "-o", str(tmp_path))
    assert code == 1
    assert "even" in err


def test_gen_trivial_order(tmp_path, capsys):
    code, stdout, _ = run(capsys, "gen", "-n", "1", "-o", str(tmp_path))
    assert code == 0 and "n=1 k=1" in stdout


def test_encode_decode_roundtrip(tmp_path, capsys):
    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    payload = bytes(range(256)) * 3 + b"tail"
    src = tmp_path / "input.bin"
    src.write_bytes(payload)
    coded = tmp_path / "coded"
    code, stdout, _ = run(
        capsys, "encode", "-r", str(rect_file), "-i", str(src), "-o", str(coded)
    )
    assert code == 0 and "n=4 k=3 mode=direct" in stdout
    packets = sorted(str(p) for p in coded.glob("packet_*.bin"))
    assert len(packets) == 4
    out = tmp_path / "out.bin"
    code, stdout, _ = run(
        capsys, "decode", "-m", str(coded / "manifest.txt"), "-o", str(out), *packets
    )
    assert code == 0
    assert out.read_bytes() == payload


def test_encode_headers_match_design(tmp_path, capsys):
    from xorcode import deserialize_packet

    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    src = tmp_path / "four.bin"
    src.write_bytes(b"abcd")
    coded = tmp_path / "coded"
    run(capsys, "encode", "-r", str(rect_file), "-i", str(src), "-o", str(coded))
    headers = [
        deserialize_packet((coded / f"packet_{i}.bin").read_bytes()).header
        for i in range(1, 5)
    ]
    assert headers == [(1, 2, 3), (2, 3, 4), (1, 2, 4), (1, 3, 4)]


def test_encode_empty_input_fails(tmp_path, capsys):
    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    src = tmp_path / "empty.bin"
    src.write_bytes(b"")
    code, _, err = run(capsys, "encode", "-r", str(rect_file), "-i", str(src), "-o", str(tmp_path))
    assert code == 1 and "empty" in err


def test_decode_with_missing_packet_lists_recoverable(tmp_path, capsys):
    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    src = tmp_path / "input.bin"
    src.write_bytes(b"0123456789")
    coded = tmp_path / "coded"
    run(capsys, "encode", "-r", str(rect_file), "-i", str(src), "-o", str(coded))
    packets = sorted(str(p) for p in coded.glob("packet_*.bin"))[:3]
    code, _, err = run(
        capsys, "decode", "-m", str(coded / "manifest.txt"), "-o", str(tmp_path / "x"), *packets
    )
    assert code == 1 and "recoverable" in err


def test_decode_corrupted_packet_is_parse_error(tmp_path, capsys):
    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    src = tmp_path / "input.bin"
    src.write_bytes(b"0123456789")
    coded = tmp_path / "coded"
    run(capsys, "encode", "-r", str(rect_file), "-i", str(src), "-o", str(coded))
    packets = sorted(coded.glob("packet_*.bin"))
    packets[0].write_bytes(packets[0].read_bytes()[:-2])
    code, _, err = run(
        capsys,
        "decode",
        "-m", str(coded / "manifest.txt"),
        "-o", str(tmp_path / "x"),
        *(str(p) for p in packets),
    )
    assert code == 2 and "truncated" in err


def test_simulate_fig2(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(FIG2_TEXT)
    out = tmp_path / "sim"
    code, stdout, _ = run(
        capsys, "simulate", "--network", str(net_file), "-n", "4", "--seed", "7", "-o", str(out)
    )
    assert code == 0
    assert "summary sinks=6 decoded=6" in stdout
    assert (out / "schedule.txt").exists() and (out / "report.txt").exists()


def test_simulate_fig3_balanced_12(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(FIG3_TEXT)
    out = tmp_path / "sim"
    code, stdout, _ = run(
        capsys,
        "simulate",
        "--network", str(net_file),
        "-n", "12",
        "--seed", "5",
        "--mode", "balanced_decode",
        "-o", str(out),
    )
    assert code == 0
    assert "phases=4" in stdout and "summary sinks=2 decoded=2" in stdout


def test_simulate_chain_three_phases(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text("source s\nsink t\nedge s a\nedge a t\n")
    code, stdout, _ = run(
        capsys, "simulate", "--network", str(net_file), "-n", "3", "-o", str(tmp_path / "sim")
    )
    assert code == 0 and "phases=3" in stdout


def test_simulate_byte_identical_reruns(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(FIG3_TEXT)
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "simulate", "--network", str(net_file), "-n", "12", "--seed", "9", "-o", str(a))
    run(capsys, "simulate", "--network", str(net_file), "-n", "12", "--seed", "9", "-o", str(b))
    for name in ("schedule.txt", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_simulate_reports_padding(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(FIG3_TEXT)
    code, stdout, _ = run(
        capsys, "simulate", "--network", str(net_file), "-n", "10", "-o", str(tmp_path / "sim")
    )
    assert code == 0 and "padding=2" in stdout


def test_simulate_infeasible_topology(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(
        "source s\nsink t1\nsink t2\nsink t3\n"
        "edge s a\nedge s b\nedge s c\n"
        "edge a t1\nedge b t1\nedge a t2\nedge c t2\nedge b t3\nedge c t3\n"
    )
    code, _, err = run(
        capsys, "simulate", "--network", str(net_file), "-n", "4", "-o", str(tmp_path / "sim")
    )
    assert code == 1 and "schedule" in err


def test_audit_routing_example(tmp_path, capsys):
    rect_file = tmp_path / "l5x12.txt"
    rect_file.write_text(L5X12.to_text())
    code, stdout, _ = run(
        capsys,
        "audit",
        "-r", str(rect_file),
        "--mode", "balanced_decode",
        "--partition", "3,10,7,2;8,4,11,9;1,6,5,12",
    )
    assert code == 0
    assert "condition=true min_paths=3" in stdout


def test_audit_from_schedule_file(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text(FIG3_TEXT)
    sim = tmp_path / "sim"
    run(capsys, "simulate", "--network", str(net_file), "-n", "12", "--seed", "2", "-o", str(sim))
    rect_file = tmp_path / "l5x12.txt"
    rect_file.write_text(L5X12.to_text())
    code, stdout, _ = run(
        capsys,
        "audit",
        "-r", str(rect_file),
        "--schedule", str(sim / "schedule.txt"),
        "--sink", "t1",
    )
    assert code == 0
    assert "min_paths=" in stdout


def test_audit_all_on_one_path_leaks(tmp_path, capsys):
    rect_file = tmp_path / "rect.txt"
    rect_file.write_text(EXAMPLE_RECT.to_text())
    code, stdout, _ = run(
        capsys, "audit", "-r", str(rect_file), "--mode", "direct", "--partition", "1,2,3,4"
    )
    assert code == 0 and "min_paths=1" in stdout


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen"])  # missing -n
    assert exc.value.code == 2
    code, _, err = run(capsys, "decode", "-m", str(tmp_path / "nope.txt"), "-o", "x", "y")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["audit", "-r", "rect.txt"])  # neither schedule nor partition
    assert exc.value.code == 2


def test_bad_network_file_is_parse_error(tmp_path, capsys):
    net_file = tmp_path / "net.txt"
    net_file.write_text("source s\nsink t\nwormhole s t\n")
    code, _, err = run(
        capsys, "simulate", "--network", str(net_file), "-n", "2", "-o", str(tmp_path)
    )
    assert code == 2 and "bad directive" in err
