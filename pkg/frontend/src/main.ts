import "./style.css";
import { ApiClient } from "./api";
import { createApp } from "./app";
import { bindToUrl, decodeState, StateStore } from "./state";

const store = new StateStore(decodeState(window.location.search));
bindToUrl(store);
window.addEventListener("popstate", () => {
  store.update(decodeState(window.location.search));
});
createApp(document.getElementById("app")!, new ApiClient(), store);
