//! Python bindings for `hireg`.

#[pyo3::pymodule]
mod pyhireg {
    use hireg::coherent::{self, Verdict};
    use hireg::family::{self, RelationFamily, UpsilonKind};
    use hireg::graphs::{self, DenseGraph};
    use hireg::{groups, regularity, Error};
    use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
    use pyo3::prelude::*;

    fn to_py(e: Error) -> PyErr {
        match e {
            Error::Argument(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
            Error::Io(_) => PyOSError::new_err(e.to_string()),
            Error::Resource(_) | Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        }
    }

    /// A simple undirected graph.
    #[pyclass(frozen, name = "Graph")]
    struct Graph {
        inner: DenseGraph,
    }

    #[pymethods]
    impl Graph {
        /// Graph from an edge list on vertices `0..n`.
        #[new]
        fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
            DenseGraph::from_edges(n, &edges)
                .map(|inner| Graph { inner })
                .map_err(to_py)
        }

        #[staticmethod]
        fn from_graph6(text: &str) -> PyResult<Self> {
            graphs::decode_graph6(text)
                .map(|inner| Graph { inner })
                .map_err(to_py)
        }

        fn to_graph6(&self) -> PyResult<String> {
            self.inner.to_graph6().map_err(to_py)
        }

        fn order(&self) -> usize {
            self.inner.order()
        }

        fn edge_count(&self) -> usize {
            self.inner.edge_count()
        }

        fn has_edge(&self, u: usize, v: usize) -> bool {
            u < self.inner.order() && v < self.inner.order() && self.inner.has_edge(u, v)
        }

        fn neighbors(&self, u: usize) -> PyResult<Vec<usize>> {
            if u >= self.inner.order() {
                return Err(PyValueError::new_err(format!("vertex {u} out of range")));
            }
            Ok(self.inner.neighbors(u).iter().collect())
        }

        fn edges(&self) -> Vec<(usize, usize)> {
            self.inner.edges()
        }

        /// `(v, k, lambda, mu)` or `None` if not strongly regular.
        fn srg_parameters(&self) -> Option<(u64, u64, u64, u64)> {
            self.inner
                .srg_parameters()
                .map(|s| (s.v, s.k, s.lambda, s.mu))
        }

        fn __len__(&self) -> usize {
            self.inner.order()
        }

        fn __repr__(&self) -> String {
            format!(
                "Graph(order={}, edges={})",
                self.inner.order(),
                self.inner.edge_count()
            )
        }
    }

    /// Builds `gamma`, `gamma-hat`, `gamma1`, `gamma2`, `upsilon-a` or
    /// `upsilon-b` for the given `m`.
    #[pyfunction]
    fn build(family: &str, m: usize) -> PyResult<Graph> {
        let g = match family {
            "gamma" => family::build_gamma(m),
            "gamma-hat" => family::build_gamma_hat(m),
            "gamma1" => family::build_gamma1(m),
            "gamma2" => family::build_gamma2(m),
            "upsilon-a" => family::build_upsilon(m, UpsilonKind::A).map(|u| u.graph),
            "upsilon-b" => family::build_upsilon(m, UpsilonKind::B).map(|u| u.graph),
            other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
        };
        g.map(|inner| Graph { inner }).map_err(to_py)
    }

    /// Tabulated structure constants `p[i][j][k]` (0-based relations).
    #[pyfunction]
    fn expected_constants(m: usize) -> PyResult<Vec<Vec<Vec<u64>>>> {
        let t = coherent::expected_constants(m).map_err(to_py)?;
        Ok(t.iter()
            .map(|p| p.iter().map(|r| r.to_vec()).collect())
            .collect())
    }

    /// Structure constants of the hyperbolic (`"rho"`) or elliptic
    /// (`"sigma"`) relation coloring, or `None` if it is not coherent.
    #[pyfunction]
    fn structure_constants(relations: &str, m: usize) -> PyResult<Option<Vec<Vec<Vec<u64>>>>> {
        let fam = match relations {
            "rho" => RelationFamily::Rho,
            "sigma" => RelationFamily::Sigma,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown relations {other:?}"
                )))
            }
        };
        let colors = family::relation_coloring(fam, m).map_err(to_py)?;
        Ok(coherent::verify_coherent(&colors)
            .map_err(to_py)?
            .ok()
            .map(|cfg| {
                let r = cfg.rank();
                (0..r)
                    .map(|i| {
                        (0..r)
                            .map(|j| (0..r).map(|k| cfg.constant(i, j, k)).collect())
                            .collect()
                    })
                    .collect()
            }))
    }

    /// `(certified, wl_rank, group_pair_orbits, separated_orbits)` for Γ^(m)
    /// and its standard group.
    #[pyfunction]
    fn certify_orbitals(m: usize) -> PyResult<(bool, usize, usize, usize)> {
        let g = family::build_gamma(m).map_err(to_py)?;
        let gens = groups::gm_generators(m).map_err(to_py)?;
        let c = coherent::certify_orbitals(&g, &gens).map_err(to_py)?;
        Ok((
            c.verdict == Verdict::Certified,
            c.wl_rank,
            c.group_pair_orbits,
            c.separated_orbits,
        ))
    }

    /// Records `"graph6 anchors"` of all types of order `(m, n)`, optionally
    /// keeping only those with `(m + 1)`-connected closure.
    #[pyfunction]
    #[pyo3(signature = (m, n, filtered = false))]
    fn graph_types(m: usize, n: usize, filtered: bool) -> PyResult<Vec<String>> {
        let mut types = regularity::enumerate_graph_types(m, n).map_err(to_py)?;
        if filtered {
            types = regularity::filter_types(&types, m).map_err(to_py)?;
        }
        Ok(types.iter().map(|t| t.record()).collect())
    }

    /// Regularity reports as JSON strings for every type of order `(k, l)`,
    /// `k <= m`, `k < l <= n`.
    #[pyfunction]
    #[pyo3(signature = (graph, m, n, filtered = false))]
    fn check_regularity(
        py: Python<'_>,
        graph: &Graph,
        m: usize,
        n: usize,
        filtered: bool,
    ) -> PyResult<Vec<String>> {
        let opts = regularity::MnOptions {
            use_filter: filtered,
            gens: None,
        };
        let reports = py
            .detach(|| regularity::check_mn_regularity(&graph.inner, m, n, opts))
            .map_err(to_py)?;
        Ok(reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable"))
            .collect())
    }

    /// Runs the command line with `args` (without the program name) and
    /// returns `(exit_code, stdout, stderr)`.
    #[pyfunction]
    fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
        py.detach(|| {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let argv = std::iter::once("hireg".to_string()).chain(args);
            let code = hireg::cli::run(argv, &mut out, &mut err);
            (
                code,
                String::from_utf8_lossy(&out).into_owned(),
                String::from_utf8_lossy(&err).into_owned(),
            )
        })
    }

    #[pymodule_init]
    fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add("__version__", hireg::cli::VERSION)
    }
}
