//! Module arguments of `tor` and `pd`, written `NAME` or `NAME:SIDE`.
//!
//! | NAME is     | sides                     | module                       |
//! |-------------|---------------------------|------------------------------|
//! | algebra `A` | `right`, `left`           | `A` over itself              |
//! | morphism `f: R → S` | `right`, `left`   | `S` over `R`                 |
//! | bimodule `_A X_C`   | `left`, `right`   | `X` over `A`, resp. `C`      |
//! | context     | `S`, `T`                  | `_R S`, resp. `T_R`          |
//!
//! Without a side the position decides: the first argument of `tor` is a
//! right module, the second a left one.

use excon::dsl::{Environment, Value};
use excon::field::Field;
use excon::homological::bimodule_sides;
use excon::module::{Module, Side};

use crate::error::{usage, CliError};

pub fn resolve<F: Field>(env: &Environment<F>, arg: &str, default: Side) -> Result<Module<F>, CliError> {
    let (name, side) = match arg.split_once(':') {
        Some((n, s)) => (n, Some(s)),
        None => (arg, None),
    };
    let value = env.get(name).ok_or_else(|| usage(format!("no declaration named `{name}`")))?;
    let side_of = |s: Option<&str>| -> Result<Side, CliError> {
        match s {
            None => Ok(default),
            Some("right") => Ok(Side::Right),
            Some("left") => Ok(Side::Left),
            Some(other) => Err(usage(format!("unknown side `{other}` (expected `left` or `right`)"))),
        }
    };
    Ok(match value {
        Value::Algebra { algebra, .. } => Module::regular(algebra.clone(), side_of(side)?),
        Value::Morphism(f) => {
            let (right, left) = bimodule_sides(f);
            match side_of(side)? {
                Side::Right => right,
                Side::Left => left,
            }
        }
        Value::Bimodule(b) => match side_of(side)? {
            Side::Left => b.left_module(),
            Side::Right => b.right_module(),
        },
        Value::Context(c) => match side {
            Some("S") => c.context.s_left(),
            Some("T") => c.context.t_right(),
            None if default == Side::Left => c.context.s_left(),
            None => c.context.t_right(),
            Some(other) => return Err(usage(format!("unknown part `{other}` of a context (expected `S` or `T`)"))),
        },
        Value::Element { .. } => return Err(usage(format!("`{name}` is an element, not a module"))),
    })
}
