use compoundkit::compound::mult_compound;
use compoundkit::io::{format_matrix_text, parse_matrix};

fn main() -> compoundkit::Result<()> {
    let a = parse_matrix("[[1, 2, 3], [4, 5, 6], [7, 8, 10]]")?;
    let c = mult_compound(&a, 2)?;
    print!("{}", format_matrix_text(c.matrix()));
    Ok(())
}
