//! A small query language over [`Graph`](crate::graph::Graph): `PREFIX`,
//! `SELECT`, `WHERE`, `a`, `;`/`,` lists, sequence paths `p/q`, `UNION`, and
//! sub-selects with `GROUP BY` and `group_concat`. Bag semantics; rows are
//! sorted on output.

mod ast;
mod eval;
mod parser;
mod report;

pub use ast::{Element, GroupPattern, Predicate, Projection, Query, QueryTerm, Select, TriplePattern};
pub use eval::{evaluate, join, BindingTable, Solution};
pub use parser::{parse_query, QueryError};
pub use report::{trend_report, value_text, Dimension, UnknownDimension};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse, Format, Graph, Term};

    const LISTING_2: &str = include_str!("../../../../fixtures/listing-2-medical.rq");
    const LISTING_3: &str = include_str!("../../../../fixtures/listing-3-facebook.rq");

    fn small_graph() -> Graph {
        parse(
            r#"@prefix ex: <http://ex.org/> .
            ex:a ex:p ex:b, ex:c ; ex:name "A" .
            ex:b ex:q ex:d ; ex:name "B" .
            ex:c ex:q ex:d, ex:e ; ex:name "C" .
            ex:d ex:name "D" ."#,
            Format::Turtle,
        )
        .unwrap()
    }

    fn run(q: &str, g: &Graph) -> BindingTable {
        evaluate(&parse_query(q).unwrap(), g)
    }

    #[test]
    fn parses_listings_verbatim() {
        let q2 = parse_query(LISTING_2).unwrap();
        assert_eq!(q2.select.projection.len(), 5);
        assert_eq!(q2.select.pattern.sub_select_count(), 1);
        let q3 = parse_query(LISTING_3).unwrap();
        assert_eq!(q3.select.pattern.union_count(), 2);
        assert_eq!(q3.select.projection.len(), 7);
    }

    #[test]
    fn unsupported_features_are_named() {
        let err = parse_query("SELECT ?x WHERE { ?x a swemls:System FILTER(?x) }").unwrap_err();
        assert!(matches!(&err, QueryError::Unsupported { feature, .. } if feature == "FILTER"), "{err}");
        let err = parse_query("SELECT ?x WHERE { OPTIONAL { ?x a swemls:System } }").unwrap_err();
        assert!(err.to_string().contains("OPTIONAL"));
        let err = parse_query("SELECT DISTINCT ?x WHERE { ?x a swemls:System }").unwrap_err();
        assert!(err.to_string().contains("DISTINCT"));
        let err = parse_query("SELECT ?x WHERE { ?x rdf:type|rdfs:label ?y }").unwrap_err();
        assert!(err.to_string().contains("property path operator `|`"));
        let err = parse_query("SELECT * WHERE { ?x ?p ?y }").unwrap_err();
        assert!(err.to_string().contains("SELECT *"));
    }

    #[test]
    fn semantic_checks() {
        assert!(matches!(parse_query("SELECT ?z WHERE { ?x ?p ?y }"), Err(QueryError::Invalid(_))));
        let top_concat = "SELECT (group_concat(?y) AS ?g) WHERE { ?x ?p ?y }";
        assert!(parse_query(top_concat).is_err());
        let ungrouped = "SELECT ?x WHERE { { SELECT ?y (group_concat(?p) AS ?g) WHERE { ?x ?p ?y } GROUP BY ?x } }";
        assert!(matches!(parse_query(ungrouped), Err(QueryError::Invalid(_))));
        let err = parse_query("SELECT ?x WHERE { ?x nope:p ?y }").unwrap_err();
        assert!(matches!(err, QueryError::UnknownPrefix { line: 1, column: 22, .. }), "{err:?}");
        let err = parse_query("SELECT ?x WHERE {\n ?x ?p }").unwrap_err();
        assert!(matches!(err, QueryError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn keywords_are_case_insensitive_and_comments_skipped() {
        let g = small_graph();
        let a = run("select ?x where { ?x <http://ex.org/q> ?y } # trailing", &g);
        let b = run("SELECT ?x /* c */ WHERE { ?x <http://ex.org/q> ?y . }", &g);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn bag_semantics_keeps_duplicates() {
        let g = small_graph();
        let t = run("PREFIX ex: <http://ex.org/> SELECT ?x WHERE { ?x ex:p ?y }", &g);
        assert_eq!(t.len(), 2);
        assert_eq!(t.rows[0], t.rows[1]);
    }

    #[test]
    fn path_equals_expansion() {
        let g = small_graph();
        let path = run("PREFIX ex: <http://ex.org/> SELECT ?x ?z WHERE { ?x ex:p/ex:q ?z }", &g);
        let expanded = run("PREFIX ex: <http://ex.org/> SELECT ?x ?z WHERE { ?x ex:p ?m . ?m ex:q ?z }", &g);
        assert_eq!(path, expanded);
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn union_size_is_sum_of_branches() {
        let g = small_graph();
        let q = "PREFIX ex: <http://ex.org/> SELECT ?x WHERE { { ?x ex:p ?y } UNION { ?x ex:q ?y } }";
        assert_eq!(run(q, &g).len(), 2 + 3);
    }

    #[test]
    fn group_concat_sorts_members() {
        let g = small_graph();
        let q = "PREFIX ex: <http://ex.org/> SELECT ?x ?names WHERE { ?x ex:p ?y .
                 { SELECT ?x (group_concat(?n;separator=\",\") AS ?names) WHERE { ?x ex:p/ex:name ?n } GROUP BY ?x } }";
        let t = run(q, &g);
        assert_eq!(t.len(), 2);
        assert_eq!(t.rows[0][1], Some(Term::literal("B,C")));
    }

    #[test]
    fn unbound_joins_with_anything() {
        let g = small_graph();
        let q = "PREFIX ex: <http://ex.org/> SELECT ?x ?y WHERE { ?x ex:name ?n . { ?x ex:p ?y } UNION { ?x ex:name \"D\" } }";
        let t = run(q, &g);
        assert_eq!(t.len(), 3);
        assert!(t.rows.iter().any(|r| r[1].is_none()));
        assert!(t.to_tsv().starts_with("?x\t?y\n"));
    }

    #[test]
    fn empty_graph_yields_no_rows() {
        assert!(run(LISTING_2, &Graph::new()).is_empty());
        assert!(run(LISTING_3, &Graph::new()).is_empty());
        assert!(trend_report(&Graph::new(), Dimension::Year).is_empty());
    }

    fn texts(t: &BindingTable, col: &str) -> Vec<String> {
        let i = t.column(col).unwrap();
        t.rows.iter().map(|r| r[i].as_ref().map(|v| v.str_value().to_owned()).unwrap_or_default()).collect()
    }

    #[test]
    fn listing_2_over_mini_kg() {
        let t = run(LISTING_2, &crate::test_fixtures::enriched_mini_kg());
        assert_eq!(t.columns, ["swModel", "statisticalModel", "trainingType", "title", "year"]);
        assert_eq!(t.len(), 4);
        let mut models = texts(&t, "statisticalModel");
        models.sort();
        assert_eq!(models, ["ARM", "Attention,GloVe,MLP,RNN", "Gated Recurrent Unit (GRU),Graph-based Attention Model,Knowledge Attention", "SVM"]);
        let mut years = texts(&t, "year");
        years.sort();
        assert_eq!(years, ["2017", "2018", "2018", "2019"]);
        assert!(texts(&t, "title").iter().all(|x| !x.starts_with("Synthetic")));
    }

    #[test]
    fn listing_3_over_mini_kg() {
        let t = run(LISTING_3, &crate::test_fixtures::enriched_mini_kg());
        assert_eq!(t.len(), 5);
        let mut rows: Vec<(String, String, String)> = t
            .rows
            .iter()
            .map(|r| {
                let cell = |c: &str| r[t.column(c).unwrap()].as_ref().map(|v| v.str_value().to_owned()).unwrap_or_default();
                (cell("year"), cell("pattern"), cell("groupSw"))
            })
            .collect();
        rows.sort();
        let pat = |id: &str| format!("http://semantic-systems.net/swemls/Pattern.{id}");
        let want = [
            ("2016", pat("F2"), "FB_500K"),
            ("2016", pat("F4"), "FB122"),
            ("2017", pat("A1"), "FB13,FB15k"),
            ("2018", pat("A1"), ""),
            ("2019", pat("F3"), "FB15k"),
        ];
        let want: Vec<(String, String, String)> =
            want.iter().map(|(y, p, g)| (y.to_string(), p.clone(), g.replace("FB", "http://semantic-systems.net/swemls/Resource.FB"))).collect();
        let shorten = |g: &str| g.split(',').map(|m| m.rsplit('.').next().unwrap_or(m).to_owned()).collect::<Vec<_>>().join(",");
        let got: Vec<(String, String, String)> = rows.iter().map(|(y, p, g)| (y.clone(), p.clone(), shorten(g))).collect();
        let want: Vec<(String, String, String)> = want.iter().map(|(y, p, g)| (y.clone(), p.clone(), shorten(g))).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn trend_report_counts_years() {
        let rows = trend_report(&crate::test_fixtures::enriched_mini_kg(), Dimension::Year);
        let want = [("2018", 3), ("2019", 3), ("2020", 3), ("2016", 2), ("2017", 2)];
        assert_eq!(rows, want.iter().map(|(y, n)| (y.to_string(), *n)).collect::<Vec<_>>());
    }

    #[test]
    fn dimensions_parse() {
        for d in Dimension::ALL {
            assert_eq!(d.to_string().parse::<Dimension>().unwrap(), d);
        }
        assert!("colour".parse::<Dimension>().is_err());
    }
}
