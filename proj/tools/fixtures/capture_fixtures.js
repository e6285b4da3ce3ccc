// Copyright 2026 The adsbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Captures AMS/TCP byte fixtures by driving the npm `ads-client` package (1.x)
// against a running `adsbench serve --workload sync`, through a recording proxy.
//
//   npm install ads-client@1
//   adsbench serve --workload sync --port 48898 &
//   node capture_fixtures.js 48898 ../../fixtures
//
// Requests are bytes produced by ads-client; responses and notifications are
// bytes from our server that ads-client accepted. Parsed values are written to
// oracle_results.json for the codec tests.

const net = require('net');
const fs = require('fs');
const path = require('path');
const ads = require('ads-client');

const serverPort = Number(process.argv[2] || 48898);
const outDir = process.argv[3] || 'fixtures';

let step = 'connect';
const frames = [];  // {label, dir, bytes}
const labelByInvoke = new Map();

function splitter(dir) {
  let buf = Buffer.alloc(0);
  return (chunk) => {
    buf = Buffer.concat([buf, chunk]);
    while (buf.length >= 6) {
      const total = 6 + buf.readUInt32LE(2);
      if (buf.length < total) break;
      const frame = buf.subarray(0, total);
      buf = buf.subarray(total);
      const cmd = frame.readUInt16LE(6 + 16);
      const invoke = frame.readUInt32LE(6 + 28);
      let label = step;
      if (dir === 'request') labelByInvoke.set(invoke, step);
      else if (cmd !== 8) label = labelByInvoke.get(invoke) || step;
      frames.push({label, dir: cmd === 8 && dir === 'response' ? 'notification' : dir, bytes: Buffer.from(frame)});
    }
  };
}

function hexDump(bytes, title) {
  const lines = [`# ${title}`, `# ${bytes.length} bytes`];
  for (let i = 0; i < bytes.length; i += 16) {
    lines.push([...bytes.subarray(i, i + 16)].map((b) => b.toString(16).padStart(2, '0')).join(' '));
  }
  return lines.join('\n') + '\n';
}

async function main() {
  const proxy = net.createServer((downstream) => {
    const upstream = net.connect(serverPort, '127.0.0.1');
    const up = splitter('request');
    const down = splitter('response');
    downstream.on('data', (d) => { up(d); upstream.write(d); });
    upstream.on('data', (d) => { down(d); downstream.write(d); });
    downstream.on('close', () => upstream.destroy());
    upstream.on('close', () => downstream.destroy());
  });
  await new Promise((r) => proxy.listen(0, '127.0.0.1', r));

  const client = new ads.Client({
    targetAmsNetId: '127.0.0.1.1.1',
    targetAdsPort: 851,
    localAmsNetId: '127.0.0.1.1.20',
    localAdsPort: 30000,
    routerAddress: '127.0.0.1',
    routerTcpPort: proxy.address().port,
    bareClient: true,
    autoReconnect: false,
    hideConsoleWarnings: true,
  });
  await client.connect();
  const results = {};

  step = 'read_device_info';
  results.read_device_info = await client.readDeviceInfo();
  step = 'read_state';
  results.read_state = await client.readPlcRuntimeState();
  step = 'write_control';
  try {
    await client.writeControl(851, 5, 0);
    results.write_control = { error: false };
  } catch (e) {
    results.write_control = { error: true, code: e.adsErrorInfo ? e.adsErrorInfo.adsErrorCode : null };
  }
  step = 'read_write';
  const handle = await client.createVariableHandle('MAIN.diVar');
  results.read_write = { handle: handle.handle, size: handle.size };
  step = 'write';
  const value = Buffer.alloc(4);
  value.writeInt32LE(0x12345678);
  await client.writeRawByHandle(handle.handle, value);
  step = 'read';
  const read = await client.readRawByHandle(handle.handle, 4);
  results.read = { data: read.toString('hex') };

  step = 'add_notification';
  let notified;
  const first = new Promise((r) => { notified = r; });
  const sub = await client.subscribeRaw(0xF005, handle.handle, 4, (data) => notified(data), 10, true);
  results.add_notification = { handle: sub.notificationHandle };
  step = 'device_notification';
  const data = await first;
  results.device_notification = { value: data.value.toString('hex'), timestamp: data.timeStamp.toISOString() };
  step = 'delete_notification';
  await sub.unsubscribe();
  results.delete_notification = { ok: true };

  step = 'symbol_not_found';
  try {
    await client.createVariableHandle('MAIN.nope');
  } catch (e) {
    results.symbol_not_found = { code: e.adsErrorInfo ? e.adsErrorInfo.adsErrorCode : null };
  }

  step = 'disconnect';
  await client.disconnect();
  proxy.close();

  fs.mkdirSync(outDir, { recursive: true });
  const written = new Set();
  for (const f of frames) {
    if (f.label === 'connect' || f.label === 'disconnect') continue;
    const label = f.dir === 'notification' ? 'device_notification' : `${f.label}_${f.dir}`;
    if (written.has(label)) continue;
    written.add(label);
    fs.writeFileSync(path.join(outDir, `${label}.hex`), hexDump(f.bytes, `${label}, captured via ads-client ${require('ads-client/package.json').version}`));
  }
  fs.writeFileSync(path.join(outDir, 'oracle_results.json'), JSON.stringify(results, null, 2) + '\n');
  console.log([...written].join('\n'));
}

main().catch((e) => { console.error(e); process.exit(1); });
