import init, { analyze_ellipsoid, holder_chain_y20, collapse_shadow } from "./pkg/systole_lab_wasm.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (typeof x === "number" ? x.toPrecision(6) : String(x));

function show(pre, obj, keys) {
  pre.classList.remove("err");
  pre.textContent = keys.map((k) => `${k.padEnd(10)} ${fmt(obj[k])}`).join("\n");
}

function fail(pre, e) {
  pre.classList.add("err");
  pre.textContent = String(e.message ?? e);
}

// --- ellipsoid ----------------------------------------------------------

let ell = null;
let yaw = 0.6, pitch = 0.35;

function project([x, y, z], scale, cx, cy) {
  const cyw = Math.cos(yaw), syw = Math.sin(yaw);
  const cp = Math.cos(pitch), sp = Math.sin(pitch);
  const x1 = cyw * x + syw * y, y1 = -syw * x + cyw * y;
  const y2 = cp * z - sp * y1, depth = sp * z + cp * y1;
  return [cx + scale * x1, cy - scale * y2, depth];
}

function drawEllipsoid() {
  const cv = $("ell-canvas"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  if (!ell) return;
  const [a, b, c] = ell.axes;
  const scale = 0.42 * cv.width / Math.max(a, b, c);
  const cx = cv.width / 2, cy = cv.height / 2;
  // Wireframe: parallels and meridians.
  g.strokeStyle = "#bbb";
  g.lineWidth = 0.7;
  for (let i = 1; i < 12; i++) {
    const th = (Math.PI * i) / 12;
    curve(g, 64, (s) => [a * Math.sin(th) * Math.cos(s), b * Math.sin(th) * Math.sin(s), c * Math.cos(th)], scale, cx, cy);
  }
  for (let j = 0; j < 12; j++) {
    const ph = (Math.PI * j) / 6;
    curve(g, 32, (s) => [a * Math.sin(s / 2) * Math.cos(ph), b * Math.sin(s / 2) * Math.sin(ph), c * Math.cos(s / 2)], scale, cx, cy);
  }
  g.strokeStyle = "#d2451e";
  g.lineWidth = 2.5;
  g.beginPath();
  ell.path.forEach((p, i) => {
    const [u, v] = project(p, scale, cx, cy);
    i ? g.lineTo(u, v) : g.moveTo(u, v);
  });
  g.stroke();
}

function curve(g, n, f, scale, cx, cy) {
  g.beginPath();
  for (let k = 0; k <= n; k++) {
    const [u, v] = project(f((2 * Math.PI * k) / n), scale, cx, cy);
    k ? g.lineTo(u, v) : g.moveTo(u, v);
  }
  g.stroke();
}

function runEllipsoid(ev) {
  ev?.preventDefault();
  const f = new FormData($("ell"));
  const [a, b, c, h] = ["a", "b", "c", "h"].map((k) => parseFloat(f.get(k)));
  try {
    const r = JSON.parse(analyze_ellipsoid(a, b, c, h));
    ell = { ...r, axes: [a, b, c] };
    show($("ell-out"), r, ["sys", "area", "R", "r", "deficit", "t", "vertices", "checks_hold"]);
  } catch (e) {
    ell = null;
    fail($("ell-out"), e);
  }
  drawEllipsoid();
}

function dragToRotate(cv) {
  let last = null;
  cv.addEventListener("pointerdown", (e) => { last = [e.clientX, e.clientY]; cv.setPointerCapture(e.pointerId); });
  cv.addEventListener("pointerup", () => { last = null; });
  cv.addEventListener("pointermove", (e) => {
    if (!last) return;
    yaw += (e.clientX - last[0]) * 0.01;
    pitch = Math.max(-1.5, Math.min(1.5, pitch + (e.clientY - last[1]) * 0.01));
    last = [e.clientX, e.clientY];
    drawEllipsoid();
  });
}

// --- Hölder chain -------------------------------------------------------

function runChain() {
  const t = parseFloat($("t").value);
  $("t-val").textContent = t.toFixed(2);
  let r;
  try {
    r = JSON.parse(holder_chain_y20(t));
  } catch (e) {
    return fail($("chain-out"), e);
  }
  const v = r.variance;
  show($("chain-out"), { ...r, deficit: v.deficit, "2πVar": v.bound, tau: v.tau },
    ["area", "santalo", "holder", "pu_bound", "sys", "deficit", "2πVar", "tau", "holds"]);

  const cv = $("chain-canvas"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const lens = r.circles.map((c) => c[1]);
  const lo = Math.min(2 * r.sys, ...lens) * 0.97, hi = Math.max(...lens) * 1.03;
  const X = (z) => 30 + ((z + 1) / 2) * (cv.width - 40);
  const Y = (l) => cv.height - 20 - ((l - lo) / (hi - lo)) * (cv.height - 30);
  g.fillStyle = "#2a6fb0";
  for (const [z, l] of r.circles) g.fillRect(X(z) - 1, Y(l) - 1, 2, 2);
  g.strokeStyle = "#d2451e";
  g.setLineDash([5, 4]);
  g.beginPath();
  g.moveTo(X(-1), Y(2 * r.sys));
  g.lineTo(X(1), Y(2 * r.sys));
  g.stroke();
  g.setLineDash([]);
  g.fillStyle = "#444";
  g.fillText("pole height z", cv.width / 2 - 30, cv.height - 4);
  g.fillText("length", 2, 12);
}

// --- collapse -----------------------------------------------------------

function runShadow() {
  const a = parseFloat($("a").value);
  $("a-val").textContent = a.toFixed(2);
  let r;
  try {
    r = JSON.parse(collapse_shadow(a));
  } catch (e) {
    return fail($("shadow-out"), e);
  }
  show($("shadow-out"), r, ["a", "sys", "width", "area", "shadow_area", "deficit", "limit"]);
  const cv = $("shadow-canvas"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const s = cv.width * 0.42, c = cv.width / 2;
  g.fillStyle = "#e8eef6";
  g.strokeStyle = "#2a6fb0";
  g.beginPath();
  r.outline.forEach(([x, y], i) => (i ? g.lineTo(c + s * x, c - s * y) : g.moveTo(c + s * x, c - s * y)));
  g.closePath();
  g.fill();
  g.stroke();
  // Side view of the body, squashed to thickness a.
  g.strokeStyle = "#d2451e";
  g.beginPath();
  g.ellipse(c, c, s, s * a, 0, 0, 2 * Math.PI);
  g.stroke();
}

await init();
$("ell").addEventListener("submit", runEllipsoid);
$("t").addEventListener("change", runChain);
$("a").addEventListener("change", runShadow);
dragToRotate($("ell-canvas"));
runEllipsoid();
runChain();
runShadow();
