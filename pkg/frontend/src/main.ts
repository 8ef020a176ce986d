import { SessionApi } from "./api";
import { EditorApp } from "./app";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8023";
const strategy = params.get("strategy") ?? "simple_cga";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new EditorApp(root, new SessionApi(baseUrl), strategy);
app.init().catch((error) => {
  root.innerHTML = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = `Cannot reach the session service at ${baseUrl}: ${error}`;
  root.appendChild(banner);
});
