use std::sync::Arc;

use srimcount::count::Counter;
use srimcount::gf::Field;
use srimcount::hayes::GroupStructure;

fn main() -> srimcount::Result<()> {
    let field = Arc::new(Field::with_order(3)?);
    let g = Arc::new(GroupStructure::build(field, 2, 1)?);
    let c = Counter::new(g.clone())?;
    let eps = g.index_of(&g.parse_class("a=(1,0);b=(2)")?)?;
    println!("I_3(7; {}) = {}", g.fmt_index(eps), c.i(7, eps)?);
    println!("sum over classes = {}", c.i_all(7)?.iter().sum::<i128>());
    let srim = Counter::new(Arc::new(GroupStructure::build(g.field_arc().clone(), 2, 0)?))?;
    println!("S_3(5; {}) = {}", srim.group().fmt_index(0), srim.s(5, 0)?);
    Ok(())
}
