// quick probe: verify every table row against the computed spaces
use cosym_core::catalog::Catalog;
fn main() {
    let cat = Catalog::with_data_path(std::path::Path::new("data/ovando4d.json")).unwrap();
    let mut bad = 0;
    for table in [1u8, 2u8] {
        for row in cat.table_rows(table).unwrap() {
            match cat.verify_table_row(table, &row) {
                Ok(rep) => {
                    if !rep.passed() {
                        bad += 1;
                        println!("FAIL {} (table {})", row, table);
                        for case in &rep.cases {
                            for ch in &case.checks {
                                if let cosym_core::catalog::CheckStatus::Fail(why) = &ch.status {
                                    println!("   {:?} :: {} -> {}", case.params.iter().map(|(k,v)|(k.clone(),v.to_string())).collect::<Vec<_>>(), ch.name, why);
                                }
                            }
                        }
                    } else {
                        println!("ok   {} (table {})", row, table);
                    }
                }
                Err(e) => { bad += 1; println!("ERR  {}: {}", row, e); }
            }
        }
    }
    std::process::exit(if bad == 0 {0} else {1});
}
