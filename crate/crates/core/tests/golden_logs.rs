//! Run logs are frozen byte for byte with the timing line suppressed. The
//! seeds were found once by running the loop and are part of the fixture.

use diffactor::cli::run;

fn factor_log(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["diffactor", "factor"];
    argv.extend_from_slice(args);
    argv.push("--no-timing");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn check(args: &[&str], golden: &str) {
    let (code, log) = factor_log(args);
    assert_eq!(code, 0);
    assert_eq!(log, golden);
}

#[test]
fn fermat_five_seed_0() {
    check(&["4294967297", "--seed", "0"], include_str!("golden/factor_4294967297_seed0.txt"));
}

#[test]
fn example_8219999_seed_0() {
    check(&["8219999", "--seed", "0"], include_str!("golden/factor_8219999_seed0.txt"));
}

#[test]
fn oracle_299_seed_0() {
    check(
        &["299", "--seed", "0", "--source", "oracle"],
        include_str!("golden/factor_299_oracle_seed0.txt"),
    );
}

#[test]
fn aggressive_1099551473989_seed_0() {
    check(
        &["1099551473989", "--seed", "0", "--aggressive"],
        include_str!("golden/factor_1099551473989_aggressive_seed0.txt"),
    );
}

#[test]
fn log_grammar() {
    let log = include_str!("golden/factor_4294967297_seed0.txt");
    let lines: Vec<&str> = log.lines().collect();
    assert_eq!(lines[0], "[attempt 1] trying a = 3134767160");
    assert_eq!(lines[1], "  sampling words of length L = 2000, max_samples = 120000, stable_hits = 8");
    let collision = lines.iter().find(|l| l.starts_with("[collision #")).unwrap();
    assert!(collision.starts_with("[collision #  1]  D_min = "), "{collision}");
    assert!(collision.contains("   running_gcd = "));
    // every later attempt, SUCCESS and FINAL are preceded by a blank line
    for (i, line) in lines.iter().enumerate().skip(1) {
        if line.starts_with("[attempt") || line.starts_with("SUCCESS") || line.starts_with("FINAL") {
            assert_eq!(lines[i - 1], "", "line {i}: {line}");
        }
    }
    assert_eq!(lines.last(), Some(&"FINAL: 4294967297 = 641 * 6700417"));
}

#[test]
fn timing_line_format() {
    let (code, log) = {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["diffactor", "factor", "8219999"], &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    };
    assert_eq!(code, 0);
    let last = log.lines().last().unwrap();
    let rest = last.strip_prefix("TOTAL TIME: ").expect(last);
    let (secs, clock) = rest.split_once(" s  (").unwrap();
    let (whole, frac) = secs.split_once('.').unwrap();
    assert!(whole.parse::<u64>().is_ok() && frac.len() == 3 && frac.parse::<u32>().is_ok(), "{secs}");
    assert!(clock.ends_with(')') && clock.matches(':').count() == 2, "{clock}");
    // everything before it equals the frozen log
    let body = &log[..log.len() - last.len() - 1];
    assert_eq!(body, include_str!("golden/factor_8219999_seed0.txt"));
}
