import init, { tokenize, DemoModel } from "./pkg/nbknn_wasm.js";

const $ = (id) => document.getElementById(id);
const COLORS = { legitimate: "#1b6e3a", spam: "#b3261e" };
let model = null;
let sampleIndex = { spam: 0, ham: 0 };

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function params() {
  return {
    k: Number($("k").value),
    metric: $("metric").value,
    alpha: Number($("alpha").value),
    beta: Number($("beta").value),
  };
}

function train() {
  showError(null);
  try {
    model?.free();
    model = new DemoModel(
      Number($("seed").value), Number($("nspam").value), Number($("nham").value),
      Number($("fraction").value), Number($("dim").value),
    );
  } catch (e) {
    model = null;
    showError(e);
    return;
  }
  const s = JSON.parse(model.summary());
  const top = s.top_features.map(([f, g]) => `${f} (${g.toFixed(3)})`).join(", ");
  $("summary").textContent =
    `${s.documents} messages, ${s.train} train / ${s.test} test, V = ${s.dimension}. Top features: ${top}`;
  sampleIndex = { spam: 0, ham: 0 };
  loadSample(true);
  drawCurve();
}

function loadSample(spam) {
  if (!model) return;
  const key = spam ? "spam" : "ham";
  $("message").value = model.sample(spam, sampleIndex[key]++);
  update();
}

function update() {
  const text = $("message").value;
  const view = JSON.parse(tokenize(text));
  $("token-count").textContent = view.tokens.length;
  $("tag-count").textContent = view.tag_count;
  $("tokens").textContent = view.tokens.join(" ");
  $("k-value").textContent = $("k").value;
  if (!model) return;
  const p = params();
  try {
    showError(null);
    const c = JSON.parse(model.classify(text, p.k, p.metric, p.alpha, p.beta));
    $("verdict").className = "verdict " + c.label;
    $("verdict").textContent = `${c.label}  (δG = ${c.delta_g.toFixed(4)})`;
    drawScores(c);
    $("neighbors").innerHTML =
      "<tr><th>neighbor</th><th>label</th><th>" + (p.metric === "cosine" ? "similarity" : "distance") + "</th></tr>" +
      c.neighbors.map((n) =>
        `<tr><td>#${n.id}</td><td class="${n.label}">${n.label}</td><td>${n.score.toFixed(4)}</td></tr>`).join("");
  } catch (e) {
    showError(e);
  }
}

function drawScores(c) {
  const cv = $("scores");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const rows = [["Pr_nb[G]", c.pr_nb_g], ["Pr_knn[G]", c.pr_knn_g], ["δG", c.delta_g]];
  const x0 = 80, w = cv.width - x0 - 50;
  g.font = "12px system-ui";
  rows.forEach(([name, v], i) => {
    const y = 10 + i * 32;
    g.fillStyle = "#eee";
    g.fillRect(x0, y, w, 20);
    g.fillStyle = v >= 0.5 ? COLORS.legitimate : COLORS.spam;
    g.fillRect(x0, y, w * v, 20);
    g.fillStyle = "#222";
    g.fillText(name, 4, y + 14);
    g.fillText(v.toFixed(3), x0 + w + 6, y + 14);
  });
  g.strokeStyle = "#444";
  g.setLineDash([3, 3]);
  g.beginPath();
  g.moveTo(x0 + w / 2, 4);
  g.lineTo(x0 + w / 2, cv.height - 4);
  g.stroke();
  g.setLineDash([]);
}

function drawCurve() {
  if (!model) return;
  const p = params();
  let curve;
  try {
    curve = JSON.parse(model.accuracyCurve(p.metric, Number($("k").max), p.alpha, p.beta));
  } catch (e) {
    showError(e);
    return;
  }
  const base = curve[0];
  const pts = curve.slice(1);
  const cv = $("curve");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const L = 50, R = 120, T = 15, B = 35;
  const W = cv.width - L - R, H = cv.height - T - B;
  const lo = Math.max(0, Math.floor(Math.min(...curve.flatMap((c) => [c.legitimate, c.spam])) * 10) / 10);
  const X = (k) => L + (pts.length === 1 ? W / 2 : ((k - 1) / (pts.length - 1)) * W);
  const Y = (v) => T + (1 - (v - lo) / (1 - lo || 1)) * H;

  g.strokeStyle = "#ccc";
  g.fillStyle = "#444";
  g.font = "12px system-ui";
  for (let v = lo; v <= 1.0001; v += 0.1) {
    g.beginPath(); g.moveTo(L, Y(v)); g.lineTo(L + W, Y(v)); g.stroke();
    g.fillText(v.toFixed(1), 10, Y(v) + 4);
  }
  pts.forEach((pt) => g.fillText(String(pt.k), X(pt.k) - 3, T + H + 18));
  g.fillText("k", L + W / 2, T + H + 32);

  for (const cls of ["legitimate", "spam"]) {
    g.strokeStyle = COLORS[cls];
    g.fillStyle = COLORS[cls];
    g.setLineDash([6, 4]);
    g.beginPath(); g.moveTo(L, Y(base[cls])); g.lineTo(L + W, Y(base[cls])); g.stroke();
    g.setLineDash([]);
    g.lineWidth = 2;
    g.beginPath();
    pts.forEach((pt, i) => (i ? g.lineTo(X(pt.k), Y(pt[cls])) : g.moveTo(X(pt.k), Y(pt[cls]))));
    g.stroke();
    g.lineWidth = 1;
    pts.forEach((pt) => { g.beginPath(); g.arc(X(pt.k), Y(pt[cls]), 3, 0, 7); g.fill(); });
    g.fillText(cls, L + W + 10, Y(pts[pts.length - 1][cls]) + 4);
  }
  g.strokeStyle = "#222";
  const kx = X(p.k);
  g.beginPath(); g.moveTo(kx, T); g.lineTo(kx, T + H); g.stroke();
}

await init();
$("train").addEventListener("click", train);
$("sample-spam").addEventListener("click", () => loadSample(true));
$("sample-ham").addEventListener("click", () => loadSample(false));
$("message").addEventListener("input", update);
for (const id of ["k", "metric", "alpha", "beta"]) {
  $(id).addEventListener("input", () => { update(); drawCurve(); });
}
train();
