use std::fs;
use std::path::Path;
use std::process::Command;

/// Each case file holds `$ ARGS`, `? CODE`, then the expected stdout.
fn run_case(path: &Path) -> Result<(), String> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let args = lines.next().and_then(|l| l.strip_prefix("$ ")).ok_or("missing `$` line")?;
    let code: i32 = lines
        .next()
        .and_then(|l| l.strip_prefix("? "))
        .ok_or("missing `?` line")?
        .parse()
        .map_err(|e| format!("bad exit code: {e}"))?;
    let expected: String = lines.map(|l| format!("{l}\n")).collect();
    let argv = shlex::split(args).ok_or("unbalanced quotes")?;
    let out = Command::new(env!("CARGO_BIN_EXE_elemsem")).args(&argv).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    if out.status.code() != Some(code) {
        return Err(format!(
            "exit {:?}, expected {code}\nstderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    if stdout != expected {
        return Err(format!("stdout:\n{stdout}\nexpected:\n{expected}"));
    }
    Ok(())
}

#[test]
fn golden_cases() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut paths: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    assert!(paths.len() >= 20);
    let failures: Vec<String> = paths
        .iter()
        .filter_map(|p| run_case(p).err().map(|e| format!("{}: {e}", p.display())))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["enum", "--depth", "1", "--ints", "0..2", "--width", "2", "(\\f. f 1) (\\x. x + 1)"];
    let run = || Command::new(env!("CARGO_BIN_EXE_elemsem")).args(args).output().unwrap().stdout;
    assert_eq!(run(), run());
}

#[test]
fn file_input() {
    let path = std::env::temp_dir().join(format!("elemsem-{}.lam", std::process::id()));
    fs::write(&path, "(\\x. x * 3) 4\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_elemsem"))
        .args(["eval", "--file"])
        .arg(&path)
        .output()
        .unwrap();
    fs::remove_file(&path).ok();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "12\n");
    let both = Command::new(env!("CARGO_BIN_EXE_elemsem"))
        .args(["eval", "1", "--file", "x"])
        .output()
        .unwrap();
    assert_eq!(both.status.code(), Some(2));
}
