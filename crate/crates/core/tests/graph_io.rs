use parsssp::graph::{build_csr, load_binary, parse_edge_list, read_edge_list, save_binary};
use parsssp::Error;

#[test]
fn text_to_binary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("g.txt");
    std::fs::write(&text, "# toy\np 5 4\n0 1 3\n1 2 4\n2 3 5\n3 4 6\n").unwrap();
    let g = build_csr(&read_edge_list(&text).unwrap(), false).unwrap();
    let bin = dir.path().join("g.bin");
    save_binary(&g, &bin).unwrap();
    let h = load_binary(&bin).unwrap();
    assert_eq!(g, h);
    assert_eq!(g.fingerprint(), h.fingerprint());
}

#[test]
fn errors_carry_context() {
    match parse_edge_list(b"0 1 2\n1 x 3\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(load_binary("/nonexistent/graph.bin"), Err(Error::Io(_))));
}

#[test]
fn load_graph_sniffs_the_format() {
    use parsssp::graph::{chain, load_graph, save_edge_list};
    let dir = tempfile::tempdir().unwrap();
    let e = chain(6, 2);
    let text = dir.path().join("c.txt");
    save_edge_list(&e, &text).unwrap();
    let g = load_graph(&text, false).unwrap();
    assert_eq!(g, build_csr(&e, false).unwrap());
    let bin = dir.path().join("c.bin");
    save_binary(&g, &bin).unwrap();
    assert_eq!(load_graph(&bin, true).unwrap(), g);
}
