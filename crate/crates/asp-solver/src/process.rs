//! Running external solver pipelines with a deadline.

use std::io::{Read, Write};
use std::process::{Child, Command, ExitStatus, Stdio};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use wait_timeout::ChildExt;

use crate::SolverError;

/// How long output readers may lag behind a finished or killed process.
const GRACE: Duration = Duration::from_millis(500);

pub(crate) struct StageOutcome {
    pub status: Option<ExitStatus>,
    pub stderr: String,
}

pub(crate) struct PipelineOutcome {
    pub stages: Vec<StageOutcome>,
    pub stdout: String,
    pub timed_out: bool,
}

/// Builds a command from a shell-like command line plus extra arguments.
pub(crate) fn command(line: &str, extra: &[String]) -> Result<Command, SolverError> {
    let parts = shlex::split(line).filter(|p| !p.is_empty()).ok_or_else(|| SolverError::SolverNotFound(line.to_string()))?;
    let mut cmd = Command::new(&parts[0]);
    cmd.args(&parts[1..]).args(extra);
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        // own process group, so a timeout also takes down grandchildren
        cmd.process_group(0);
    }
    Ok(cmd)
}

struct Collector {
    buf: Arc<Mutex<Vec<u8>>>,
    handle: JoinHandle<()>,
}

impl Collector {
    fn start(mut source: impl Read + Send + 'static) -> Self {
        let buf = Arc::new(Mutex::new(Vec::new()));
        let sink = Arc::clone(&buf);
        let handle = thread::spawn(move || {
            let mut chunk = [0u8; 8192];
            while let Ok(n) = source.read(&mut chunk) {
                if n == 0 {
                    break;
                }
                sink.lock().expect("collector lock").extend_from_slice(&chunk[..n]);
            }
        });
        Collector { buf, handle }
    }

    /// Whatever has been read once the reader stops or the grace period ends.
    fn finish(self, until: Instant) -> String {
        while !self.handle.is_finished() && Instant::now() < until {
            thread::sleep(Duration::from_millis(5));
        }
        let bytes = self.buf.lock().expect("collector lock").clone();
        String::from_utf8_lossy(&bytes).into_owned()
    }
}

fn kill(child: &mut Child) {
    #[cfg(unix)]
    // SAFETY: plain signal delivery to the group created in `command`
    unsafe {
        libc::kill(-(child.id() as i32), libc::SIGKILL);
    }
    let _ = child.kill();
    let _ = child.wait();
}

/// Runs `stages` as a pipeline, feeding `input` to the first one.
pub(crate) fn run_pipeline(stages: Vec<Command>, input: Option<String>, timeout: Duration) -> Result<PipelineOutcome, SolverError> {
    let deadline = Instant::now() + timeout;
    let count = stages.len();
    let mut children: Vec<Child> = Vec::new();
    let mut stderrs = Vec::new();
    let mut prev_stdout = None;

    for (i, mut cmd) in stages.into_iter().enumerate() {
        let stdin = match prev_stdout.take() {
            Some(out) => Stdio::from(out),
            None if input.is_some() => Stdio::piped(),
            None => Stdio::null(),
        };
        cmd.stdin(stdin).stdout(Stdio::piped()).stderr(Stdio::piped());
        let mut child = match cmd.spawn() {
            Ok(c) => c,
            Err(e) => {
                children.iter_mut().for_each(kill);
                let program = cmd.get_program().to_string_lossy().into_owned();
                return Err(match e.kind() {
                    std::io::ErrorKind::NotFound | std::io::ErrorKind::PermissionDenied => {
                        SolverError::SolverNotFound(program)
                    }
                    _ => SolverError::SolverCrashed { exit_code: None, stderr: e.to_string(), raw_output: String::new() },
                });
            }
        };
        stderrs.push(Collector::start(child.stderr.take().expect("piped stderr")));
        if i + 1 < count {
            prev_stdout = child.stdout.take();
        }
        children.push(child);
    }

    let stdout = Collector::start(children.last_mut().expect("at least one stage").stdout.take().expect("piped stdout"));
    if let Some(text) = input {
        let mut stdin = children[0].stdin.take().expect("piped stdin");
        // a solver that exits early closes the pipe; that shows in its status
        thread::spawn(move || {
            let _ = stdin.write_all(text.as_bytes());
        });
    }

    let mut timed_out = false;
    let mut statuses = Vec::new();
    // wait from the end of the pipeline: the last stage decides the result
    for child in children.iter_mut().rev() {
        let status = if timed_out {
            None
        } else {
            let left = deadline.saturating_duration_since(Instant::now());
            child.wait_timeout(left).ok().flatten()
        };
        if status.is_none() {
            timed_out = true;
        }
        statuses.push(status);
    }
    statuses.reverse();
    if timed_out {
        children.iter_mut().for_each(kill);
    }

    let until = Instant::now() + GRACE;
    let stdout = stdout.finish(until);
    let stages = statuses
        .into_iter()
        .zip(stderrs)
        .map(|(status, err)| StageOutcome { status, stderr: err.finish(until) })
        .collect();
    Ok(PipelineOutcome { stages, stdout, timed_out })
}
