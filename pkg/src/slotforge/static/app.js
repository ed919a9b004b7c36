var x=class extends Error{constructor(e,n,o,r={}){super(o);this.status=e;this.code=n;this.details=r}};async function S(s){let t="http_error",e=`${s.status}`,n={};try{let o=await s.json();t=o.code??t,e=o.message??e,n=o.details??{}}catch{}return new x(s.status,t,e,n)}var L=class{constructor(t=""){this.baseUrl=t}async getJson(t){let e=await fetch(`${this.baseUrl}${t}`);if(!e.ok)throw await S(e);return await e.json()}getClusters(t){return this.getJson(`/sessions/${t}/clusters`)}getDocument(t,e){return this.getJson(`/sessions/${t}/documents/${e}`)}getEvaluation(t){return this.getJson(`/sessions/${t}/evaluation`)}async postOperation(t,e,n){let o=await fetch(`/sessions/${t}/operations`,{method:"POST",headers:{"content-type":"application/json"},body:JSON.stringify({revision:e,op:n})});if(!o.ok)throw await S(o);return await o.json()}};function C(s){let t=0;for(let n=0;n<s.length;n++)t=t*31+s.charCodeAt(n)>>>0;return`hsl(${t%360}, 70%, 78%)`}function T(s,t,e){let n=document.createElement("li");n.className="question-row",n.dataset.qid=s.id;let o=document.createElement("span");o.className="question-text",o.textContent=s.text;let r=document.createElement("span");r.className="question-answer",r.textContent=` \u2192 ${s.answer} (${s.doc_id})`,n.append(o,r);let c=document.createElement("button");c.textContent="edit",c.className="edit-question",c.addEventListener("click",()=>{let l=document.createElement("span"),a=document.createElement("input");a.className="edit-input",a.value=s.text;let d=document.createElement("button");d.textContent="save",d.className="save-edit",d.addEventListener("click",()=>{t.submit({type:"edit_question",qid:s.id,new_text:a.value})}),l.append(a,d),n.replaceChildren(l)}),n.appendChild(c);let i=document.createElement("button");i.textContent="delete",i.className="delete-question",i.addEventListener("click",()=>{t.submit({type:"delete_question",qid:s.id})}),n.appendChild(i);for(let l of e){let a=document.createElement("button");a.textContent=l,a.className=`${l}-question`,a.addEventListener("click",()=>{t.submit(l==="demote"?{type:"demote_question",qid:s.id}:{type:"promote_question",qid:s.id})}),n.appendChild(a)}return n}function H(s,t){let e=document.createElement("div");e.className="cluster-view";let n=document.createElement("form");n.className="upweight-form",n.innerHTML=`
    <label>upweight words <input name="words" class="upweight-words" placeholder="increase decrease"></label>
    <label>factor <input name="factor" class="upweight-factor" type="number" value="10" step="any"></label>
    <button type="submit" class="upweight-submit">Upweight & recluster</button>`,e.appendChild(n);let o=document.createElement("div");o.className="merge-bar";let r=document.createElement("button");r.textContent="Merge selected",r.className="merge-submit",o.appendChild(r),e.appendChild(o);let c=document.createElement("div");c.className="cluster-cards";for(let i of s.clusters){let l=document.createElement("section");l.className="cluster-card",l.dataset.clusterId=String(i.id);let a=document.createElement("header"),d=document.createElement("input");d.type="checkbox",d.className="merge-select",d.dataset.clusterId=String(i.id);let u=document.createElement("h3");u.innerHTML=`Cluster ${i.id} <span class="slot-chip" data-slot="${i.slot}" style="background:${C(i.slot)}">${i.slot}</span>`,a.append(d,u),l.appendChild(a);let v=document.createElement("ul");v.className="representative-block";for(let p of i.representative)v.appendChild(T(p,t,["demote"]));l.appendChild(v);let E=document.createElement("details");E.className="non-representative-block";let m=document.createElement("summary");m.textContent=`non-representative (${i.non_representative.length})`,E.appendChild(m);let g=document.createElement("ul");for(let p of i.non_representative)g.appendChild(T(p,t,["promote"]));E.appendChild(g),l.appendChild(E);let f=document.createElement("form");f.className="add-question-form",f.innerHTML=`
      <input class="add-question-text" placeholder="ask a new question\u2026">
      <button type="submit" class="add-question-submit">Add to cluster ${i.id}</button>`,f.addEventListener("submit",p=>{p.preventDefault();let q=f.querySelector(".add-question-text");q.value.trim()&&t.submit({type:"add_question",text:q.value.trim(),target_cluster:i.id})}),l.appendChild(f),c.appendChild(l)}return e.appendChild(c),n.addEventListener("submit",i=>{i.preventDefault();let l=n.querySelector(".upweight-words").value.split(/[\s,]+/).filter(Boolean),a=Number(n.querySelector(".upweight-factor").value);!l.length||!(a>0)||t.submit({type:"upweight_words",words:l,factor:a})}),r.addEventListener("click",()=>{let i=Array.from(e.querySelectorAll(".merge-select:checked"),l=>Number(l.dataset.clusterId));i.length<2||t.submit({type:"merge_clusters",ids:i})}),e}function O(s,t){let e=document.createElement("div");e.className="document-text";let n=[...t].sort((r,c)=>r.start-c.start||r.end-c.end),o=0;for(let r of n){if(r.start<o)continue;r.start>o&&e.appendChild(document.createTextNode(s.slice(o,r.start)));let c=document.createElement("mark");c.className="answer-highlight",c.dataset.slot=r.slot,c.dataset.questionId=r.question_id,c.style.background=C(r.slot),c.title=`${r.slot} (cluster ${r.cluster_id})`,c.textContent=s.slice(r.start,r.end),e.appendChild(c),o=r.end}return o<s.length&&e.appendChild(document.createTextNode(s.slice(o))),e}function M(s,t,e){let n=document.createElement("div");n.className="document-view";let o=document.createElement("h2");o.textContent=`Document ${s.doc_id}`,n.appendChild(o),n.appendChild(O(s.text,s.highlights));let r=document.createElement("div");r.className="question-groups";let c=new Map;for(let a of s.questions){let d=c.get(a.cluster_id)??[];d.push(a),c.set(a.cluster_id,d)}for(let[a,d]of[...c.entries()].sort((u,v)=>u[0]-v[0])){let u=document.createElement("section");u.className="question-group",u.dataset.clusterId=String(a);let v=d[0]?.slot??"\u2205";u.innerHTML=`<h4>Cluster ${a} <span class="slot-chip" data-slot="${v}" style="background:${C(v)}">${v}</span></h4>`;let E=document.createElement("ul");for(let m of d){let g=document.createElement("li");g.className="question-row",g.dataset.qid=m.id;let f=document.createElement("span");f.className=m.representative?"question-text representative":"question-text",f.textContent=m.text,g.appendChild(f);let p=document.createElement("select");p.className="move-select";let q=document.createElement("option");q.value="",q.textContent="move to\u2026",p.appendChild(q);for(let h of t){if(h===m.cluster_id)continue;let w=document.createElement("option");w.value=String(h),w.textContent=`cluster ${h}`,p.appendChild(w)}p.addEventListener("change",()=>{p.value!==""&&e.submit({type:"move_question",qid:m.id,to_cluster:Number(p.value)})}),g.appendChild(p);let _=document.createElement("button");_.textContent="edit",_.className="edit-question",_.addEventListener("click",()=>{let h=document.createElement("input");h.className="edit-input",h.value=m.text;let w=document.createElement("button");w.textContent="save",w.className="save-edit",w.addEventListener("click",()=>{e.submit({type:"edit_question",qid:m.id,new_text:h.value})}),g.replaceChildren(h,w)}),g.appendChild(_);let $=document.createElement("button");if($.textContent="delete",$.className="delete-question",$.addEventListener("click",()=>{e.submit({type:"delete_question",qid:m.id})}),g.appendChild($),m.representative){let h=document.createElement("button");h.textContent="demote",h.className="demote-question",h.addEventListener("click",()=>{e.submit({type:"demote_question",qid:m.id})}),g.appendChild(h)}E.appendChild(g)}u.appendChild(E),r.appendChild(u)}n.appendChild(r);let i=document.createElement("form");i.className="ask-question-form";let l=t.map(a=>`<option value="${a}">cluster ${a}</option>`).join("");return i.innerHTML=`
    <input class="ask-question-text" placeholder="ask a question about this document\u2026">
    <select class="ask-question-cluster"><option value="">nearest cluster</option>${l}</select>
    <button type="submit" class="ask-question-submit">Ask</button>`,i.addEventListener("submit",a=>{a.preventDefault();let d=i.querySelector(".ask-question-text").value.trim();if(!d)return;let u=i.querySelector(".ask-question-cluster").value;e.submit({type:"add_question",text:d,target_cluster:u===""?null:Number(u)})}),n.appendChild(i),n}function b(s){return s.toFixed(3)}function I(s){let t=document.createElement("section");t.className="evaluation-panel";let e=s.report,n=[];for(let o of Object.keys(e.per_slot).sort()){let r=e.per_slot[o];n.push(`<tr><td><span class="chip" style="background:${C(o)}"></span>${o}</td><td>${b(r.precision)}</td><td>${b(r.recall)}</td><td>${b(r.f1)}</td></tr>`)}return n.push(`<tr class="aggregate"><td>micro</td><td>${b(e.micro.precision)}</td><td>${b(e.micro.recall)}</td><td>${b(e.micro.f1)}</td></tr>`),n.push(`<tr class="aggregate"><td>macro</td><td>${b(e.macro.precision)}</td><td>${b(e.macro.recall)}</td><td>${b(e.macro.f1)}</td></tr>`),t.innerHTML=`
    <h3>Evaluation <small>after ${s.action_count} action(s), revision ${s.revision}</small></h3>
    <table class="metrics">
      <thead><tr><th>slot</th><th>P</th><th>R</th><th>F1</th></tr></thead>
      <tbody>${n.join("")}</tbody>
    </table>`,t}function y(s,t="info"){let e=document.querySelector("#toasts");e||(e=document.createElement("div"),e.id="toasts",document.body.appendChild(e));let n=document.createElement("div");n.className=`toast toast-${t}`,n.textContent=s,e.appendChild(n),setTimeout(()=>n.remove(),4e3)}function k(s){let t=s.match(/^#\/documents\/(.+)$/);return t?{page:"document",docId:decodeURIComponent(t[1])}:{page:"clusters"}}var N=class{constructor(t,e,n,o={page:"clusters"}){this.client=t;this.sessionId=e;this.root=n;this.route=o;this.revision=0}setRoute(t){this.route=t}async refresh(){let t=await this.client.getEvaluation(this.sessionId),e;if(this.route.page==="clusters"){let o=await this.client.getClusters(this.sessionId);this.revision=o.revision,e=H(o,this)}else{let o=await this.client.getClusters(this.sessionId),r=await this.client.getDocument(this.sessionId,this.route.docId);this.revision=r.revision,e=M(r,o.clusters.map(c=>c.id),this)}let n=this.renderNav();this.root.replaceChildren(n,I(t),e)}renderNav(){let t=document.createElement("nav");t.className="top-nav";let e=document.createElement("a");e.href="#/clusters",e.textContent="Cluster View",t.appendChild(e);let n=document.createElement("span");return n.className="session-label",n.textContent=`session ${this.sessionId} @ r${this.revision}`,t.appendChild(n),t}async submit(t){try{await this.client.postOperation(this.sessionId,this.revision,t),await this.refresh()}catch(e){if(e instanceof x&&e.status===409){y("state updated elsewhere","info"),await this.refresh();return}if(e instanceof x){y(`${e.code}: ${e.message}`,"error");return}y(String(e),"error")}}};function P(){return new URLSearchParams(window.location.search).get("session")}function R(s){let t=document.createElement("form");t.className="landing",t.innerHTML=`
    <h2>Open a session</h2>
    <input class="session-id" placeholder="session id, e.g. s000001">
    <button type="submit">Open</button>
    <p>Create sessions with <code>slotforge serve</code> + <code>POST /sessions</code>,
    or the CLI: <code>slotforge induce --corpus docs.jsonl --out session.json</code>.</p>`,t.addEventListener("submit",e=>{e.preventDefault();let n=t.querySelector(".session-id").value.trim();if(!n)return;let o=new URL(window.location.href);o.searchParams.set("session",n),window.location.href=o.toString()}),s.replaceChildren(t)}function V(){let s=document.querySelector("#app");if(!s)return;let t=P();if(!t){R(s);return}let e=new N(new L,t,s,k(window.location.hash));window.addEventListener("hashchange",()=>{e.setRoute(k(window.location.hash)),e.refresh().catch(n=>y(String(n),"error"))}),e.refresh().catch(n=>y(String(n),"error"))}V();export{V as boot};
