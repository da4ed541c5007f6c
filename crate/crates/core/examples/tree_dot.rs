// Build the odd-value graph up to degree 4 and export Graphviz.

use polycollatz::treegraph::{
    build_tree, graph_invariants, path_to_sink, segment_counts, to_dot, DotOptions, LabelStyle,
    TreeLimits,
};
use polycollatz::BitPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = build_tree(4, TreeLimits::default())?;
    let inv = graph_invariants(&g);
    println!(
        "{} nodes, {} edges, invariants hold: {}",
        g.node_count(),
        g.edge_count(),
        inv.all_hold()
    );

    let n31 = BitPoly::from_u64(31);
    let path = path_to_sink(&g, &n31)?;
    println!("31 reaches 1 through {} nodes", path.len());
    println!("{:?}", segment_counts(&g, &n31, &BitPoly::from_u64(23))?);

    let opts = DotOptions {
        label: LabelStyle::Poly,
        max_label_degree: Some(4),
        elide: true,
    };
    print!("{}", to_dot(&g, opts));
    Ok(())
}

fn main() {
    run_example().expect("tree example");
}
