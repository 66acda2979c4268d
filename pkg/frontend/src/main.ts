import { createApp } from "./app";
import "./style.css";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8000";

createApp(document.getElementById("root")!, baseUrl).catch((err) => {
  const root = document.getElementById("root")!;
  root.innerHTML = `<div class="boot-error">Cannot reach the backend at ${baseUrl}: ${err}</div>`;
});
