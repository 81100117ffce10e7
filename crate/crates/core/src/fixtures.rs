//! Reference graphs bundled with the crate.

use crate::graph::{parse_graph, StorageGraph};

macro_rules! fixtures {
    ($($name:ident),* $(,)?) => {
        $(
            pub fn $name() -> StorageGraph {
                parse_graph(include_str!(concat!("../../../fixtures/", stringify!($name), ".json")))
                    .expect(concat!("bundled fixture ", stringify!($name), " is valid"))
            }
        )*

        /// Every bundled fixture with its name.
        pub fn all() -> Vec<(&'static str, StorageGraph)> {
            vec![$((stringify!($name), $name())),*]
        }

        pub fn by_name(name: &str) -> Option<StorageGraph> {
            match name {
                $(stringify!($name) => Some($name()),)*
                _ => None,
            }
        }
    };
}

fixtures!(fig1, fig3a, fig3b, fig3c, fig5a, fig5b, fig6, fig7, fig8, fig9, fig10);
