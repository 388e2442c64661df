//! Host-side serial port API over a modelled wire.
//!
//! A write queues bytes on the host→device lane. Each byte occupies the wire for
//! ten bit times (start, eight data, stop) at the port's baud rate and reaches
//! the device on the first tick boundary at or after its last bit. `flush`
//! hands everything pending to the device immediately. The device→host lane
//! is bounded by the buffer size given to `open`; on overflow the oldest byte
//! is dropped and a warning is traced.

use std::collections::VecDeque;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use thiserror::Error;

use super::arduino::{VirtualArduino, HAPTIC_PIN};
use crate::sceneio::trace::TraceRecord;

pub const VIRTUAL_PORT: &str = "virt0";
pub const DEFAULT_BAUD: u32 = 9600;
pub const STANDARD_BAUDS: [u32; 12] = [300, 600, 1200, 2400, 4800, 9600, 14400, 19200, 38400, 57600, 115200, 230400];
const BITS_PER_BYTE: u64 = 10;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("no serial port named {0:?}")]
    NotFound(String),
    #[error("port {0:?} is already open")]
    AlreadyOpen(String),
    #[error("unsupported baud rate {0}")]
    BadBaud(u32),
    #[error("buffer size must be positive")]
    BadBuffer,
    #[error("port {0:?} is closed")]
    PortClosed(String),
    #[error("invalid port handle")]
    BadHandle,
    #[error("passthrough I/O on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Ticks between a lone byte's write and its arrival: `⌈10·len·rate / baud⌉`.
pub fn delivery_latency_ticks(len: u64, baud: u32, tick_rate: u32) -> u64 {
    let num = BITS_PER_BYTE * len * tick_rate as u64;
    num.div_ceil(baud as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transport {
    Virtual,
    /// Bytes are forwarded to a device file (e.g. `/dev/ttyACM0`).
    Passthrough(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortState {
    Closed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortHandle(usize);

#[derive(Debug, Default)]
struct Lanes {
    /// host → device: (byte, tick it reaches the device)
    tx: VecDeque<(u8, u64)>,
    /// device → host
    rx: VecDeque<u8>,
    rx_capacity: usize,
    rx_dropped: u64,
}

/// Device end of a port's channel. Can be moved to another thread.
#[derive(Debug, Clone)]
pub struct DeviceSide {
    lanes: Arc<Mutex<Lanes>>,
}

fn lock(l: &Mutex<Lanes>) -> MutexGuard<'_, Lanes> {
    l.lock().unwrap_or_else(|e| e.into_inner())
}

impl DeviceSide {
    /// Sends bytes to the host, dropping the oldest when the buffer is full.
    pub fn send(&self, bytes: &[u8]) {
        let mut lanes = lock(&self.lanes);
        for &b in bytes {
            if lanes.rx_capacity == 0 {
                lanes.rx_dropped += 1;
                continue;
            }
            if lanes.rx.len() == lanes.rx_capacity {
                lanes.rx.pop_front();
                lanes.rx_dropped += 1;
            }
            lanes.rx.push_back(b);
        }
    }

    /// Bytes still travelling toward the device.
    pub fn pending(&self) -> usize {
        lock(&self.lanes).tx.len()
    }
}

enum Endpoint {
    Arduino(VirtualArduino),
    Passthrough { path: PathBuf, file: Option<File> },
}

struct Port {
    name: String,
    state: PortState,
    baud: u32,
    lanes: Arc<Mutex<Lanes>>,
    /// End of the last queued byte, in units of 1/(tick_rate·baud) s.
    wire_free: u64,
    dropped_reported: u64,
    endpoint: Endpoint,
}

/// Registry of ports plus the devices on the other end.
pub struct SerialBus {
    ports: Vec<Port>,
    tick_rate: u32,
    records: Vec<TraceRecord>,
}

impl Default for SerialBus {
    fn default() -> Self {
        Self::new(crate::TICK_RATE)
    }
}

impl SerialBus {
    /// A bus with only the built-in virtual device.
    pub fn new(tick_rate: u32) -> Self {
        let mut bus = Self { ports: Vec::new(), tick_rate, records: Vec::new() };
        bus.add_port(VIRTUAL_PORT, Endpoint::Arduino(VirtualArduino::new()));
        bus
    }

    pub fn with_transport(tick_rate: u32, transport: &Transport) -> Self {
        let mut bus = Self::new(tick_rate);
        if let Transport::Passthrough(path) = transport {
            bus.add_passthrough(path.clone());
        }
        bus
    }

    fn add_port(&mut self, name: &str, endpoint: Endpoint) {
        self.ports.push(Port {
            name: name.to_string(),
            state: PortState::Closed,
            baud: DEFAULT_BAUD,
            lanes: Arc::default(),
            wire_free: 0,
            dropped_reported: 0,
            endpoint,
        });
    }

    /// Registers a pass-through port named after the device path.
    pub fn add_passthrough(&mut self, path: PathBuf) {
        let name = path.display().to_string();
        self.add_port(&name, Endpoint::Passthrough { path, file: None });
    }

    /// `virt0` first, then external ports sorted by name.
    pub fn list_ports(&self) -> Vec<String> {
        let mut external: Vec<String> =
            self.ports.iter().skip(1).map(|p| p.name.clone()).collect();
        external.sort();
        std::iter::once(VIRTUAL_PORT.to_string()).chain(external).collect()
    }

    pub fn open(&mut self, name: &str, baud: u32, buffer: usize) -> Result<PortHandle, SerialError> {
        let idx = self
            .ports
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| SerialError::NotFound(name.to_string()))?;
        let port = &mut self.ports[idx];
        if port.state == PortState::Open {
            return Err(SerialError::AlreadyOpen(name.to_string()));
        }
        if !STANDARD_BAUDS.contains(&baud) {
            return Err(SerialError::BadBaud(baud));
        }
        if buffer == 0 {
            return Err(SerialError::BadBuffer);
        }
        match &mut port.endpoint {
            Endpoint::Arduino(dev) => dev.begin(),
            Endpoint::Passthrough { path, file } => {
                let f = OpenOptions::new()
                    .write(true)
                    .create(false)
                    .open(&*path)
                    .map_err(|source| SerialError::Io { path: path.clone(), source })?;
                *file = Some(f);
            }
        }
        port.state = PortState::Open;
        port.baud = baud;
        port.wire_free = 0;
        port.dropped_reported = 0;
        *lock(&port.lanes) = Lanes { rx_capacity: buffer, ..Lanes::default() };
        Ok(PortHandle(idx))
    }

    pub fn close(&mut self, h: PortHandle) -> Result<(), SerialError> {
        let port = self.ports.get_mut(h.0).ok_or(SerialError::BadHandle)?;
        port.state = PortState::Closed;
        *lock(&port.lanes) = Lanes::default();
        match &mut port.endpoint {
            Endpoint::Arduino(dev) => dev.reset(),
            Endpoint::Passthrough { file, .. } => *file = None,
        }
        Ok(())
    }

    fn open_port(&mut self, h: PortHandle) -> Result<&mut Port, SerialError> {
        let port = self.ports.get_mut(h.0).ok_or(SerialError::BadHandle)?;
        if port.state != PortState::Open {
            return Err(SerialError::PortClosed(port.name.clone()));
        }
        Ok(port)
    }

    pub fn state(&self, h: PortHandle) -> Option<PortState> {
        self.ports.get(h.0).map(|p| p.state)
    }

    /// Queues `data` at tick `now`; each byte is traced as `SerialTx`.
    pub fn write(&mut self, h: PortHandle, data: &[u8], now: u64) -> Result<(), SerialError> {
        let rate = self.tick_rate as u64;
        let port = self.open_port(h)?;
        let baud = port.baud as u64;
        let mut lanes = lock(&port.lanes);
        let mut wire = port.wire_free.max(now * baud);
        let mut records = Vec::with_capacity(data.len());
        for &b in data {
            wire += BITS_PER_BYTE * rate;
            lanes.tx.push_back((b, wire.div_ceil(baud)));
            records.push(TraceRecord::serial_tx(now, b));
        }
        port.wire_free = wire;
        drop(lanes);
        self.records.extend(records);
        Ok(())
    }

    /// Hands all pending bytes to the device now.
    pub fn flush(&mut self, h: PortHandle, now: u64) -> Result<(), SerialError> {
        self.open_port(h)?;
        self.deliver(h.0, now, true)
    }

    pub fn get_available(&self, h: PortHandle) -> Result<usize, SerialError> {
        let port = self.ports.get(h.0).ok_or(SerialError::BadHandle)?;
        if port.state != PortState::Open {
            return Err(SerialError::PortClosed(port.name.clone()));
        }
        let n = lock(&port.lanes).rx.len();
        Ok(n)
    }

    pub fn read(&mut self, h: PortHandle, max: usize) -> Result<Vec<u8>, SerialError> {
        let port = self.open_port(h)?;
        let mut lanes = lock(&port.lanes);
        let n = max.min(lanes.rx.len());
        Ok(lanes.rx.drain(..n).collect())
    }

    pub fn device_side(&self, h: PortHandle) -> Option<DeviceSide> {
        self.ports.get(h.0).map(|p| DeviceSide { lanes: Arc::clone(&p.lanes) })
    }

    /// The emulated board behind `virt0`.
    pub fn arduino(&self) -> &VirtualArduino {
        match &self.ports[0].endpoint {
            Endpoint::Arduino(dev) => dev,
            Endpoint::Passthrough { .. } => unreachable!("port 0 is always virtual"),
        }
    }

    /// Delivers bytes that have arrived by tick `now` on every open port.
    pub fn pump(&mut self, now: u64) -> Result<(), SerialError> {
        for idx in 0..self.ports.len() {
            if self.ports[idx].state == PortState::Open {
                self.deliver(idx, now, false)?;
            }
        }
        Ok(())
    }

    fn deliver(&mut self, idx: usize, now: u64, all: bool) -> Result<(), SerialError> {
        let port = &mut self.ports[idx];
        let mut due = Vec::new();
        let dropped;
        {
            let mut lanes = lock(&port.lanes);
            while let Some(&(b, at)) = lanes.tx.front() {
                if !all && at > now {
                    break;
                }
                lanes.tx.pop_front();
                due.push(b);
            }
            dropped = lanes.rx_dropped;
        }
        if all {
            // the wire is idle after a flush
            port.wire_free = port.wire_free.min(now * port.baud as u64);
        }
        if dropped > port.dropped_reported {
            let lost = dropped - port.dropped_reported;
            port.dropped_reported = dropped;
            self.records.push(
                TraceRecord::warning(now, "RxOverflow")
                    .field("port", port.name.clone())
                    .field("dropped", lost.to_string()),
            );
        }
        match &mut port.endpoint {
            Endpoint::Arduino(dev) => {
                for b in due {
                    if let Some(level) = dev.handle_byte(b) {
                        self.records.push(TraceRecord::pin_change(now, HAPTIC_PIN, level == super::Level::High));
                    }
                }
            }
            Endpoint::Passthrough { path, file } => {
                if let (Some(f), false) = (file.as_mut(), due.is_empty()) {
                    f.write_all(&due)
                        .and_then(|_| f.flush())
                        .map_err(|source| SerialError::Io { path: path.clone(), source })?;
                }
            }
        }
        Ok(())
    }

    /// Drains trace records produced since the last call.
    pub fn take_records(&mut self) -> Vec<TraceRecord> {
        std::mem::take(&mut self.records)
    }
}
